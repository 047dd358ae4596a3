#pragma once

#include <stdexcept>
#include <string>

namespace acd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numeric argument or coordinate outside its valid range.
class DomainError : public Error {
public:
    using Error::Error;
};

// Grid/vector dimensions do not match what the operation requires.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Invalid configuration value.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A file exists but cannot be parsed as the expected format.
class FormatError : public Error {
public:
    using Error::Error;
};

// Image smaller than a single analysis patch.
class ImageTooSmall : public Error {
public:
    using Error::Error;
};

// Evaluation input contains only one class label.
class DegenerateEval : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace acd
