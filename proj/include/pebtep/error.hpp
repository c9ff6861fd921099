#pragma once

#include <stdexcept>
#include <string>

namespace pebtep {

// Base for every failure raised by the library. The CLI maps the
// subclasses onto its exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A configured state/instance cap would be exceeded.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class IllegalMove : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// The object under analysis violates a precondition of the requested
// operation (not read-once, not bit aligned, not a group, ...).
class PreconditionFailed : public Error {
public:
    using Error::Error;
};

}  // namespace pebtep
