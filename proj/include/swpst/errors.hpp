#pragma once

#include <stdexcept>
#include <string>

namespace swpst {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class InvalidTrace : public Error {
public:
    using Error::Error;
};

class NotPositive : public Error {
public:
    using Error::Error;
};

class NonNegligibleImaginaryPart : public Error {
public:
    using Error::Error;
};

class ReconstructionNotPositive : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidEpsilon : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NonUnitaryPointOperator : public Error {
public:
    using Error::Error;
};

}  // namespace swpst
