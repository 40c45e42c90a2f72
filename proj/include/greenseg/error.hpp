#ifndef GREENSEG_ERROR_HPP
#define GREENSEG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace greenseg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument value (bad ratio, non-positive grid size, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Operation applied to an object in the wrong state (missing attributes,
/// non-finite values, too few points).
class StateError : public Error {
public:
    using Error::Error;
};

/// Malformed text input; the message names the offending line.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Malformed binary input (bad magic, version, dtype, truncation).
class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace greenseg

#endif // GREENSEG_ERROR_HPP
