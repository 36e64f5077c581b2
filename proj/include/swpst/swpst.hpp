#pragma once

#include "swpst/errors.hpp"
#include "swpst/qmat.hpp"
#include "swpst/phase_space.hpp"
#include "swpst/states.hpp"
#include "swpst/tomography.hpp"
#include "swpst/kicked_top.hpp"
#include "swpst/study.hpp"
#include "swpst/io.hpp"
