#pragma once

#include <stdexcept>
#include <string>

namespace nccut {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class DecodeError : public Error {
public:
    using Error::Error;
};

class InvalidRoi : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class InvalidPath : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class InvalidLabeling : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace nccut
