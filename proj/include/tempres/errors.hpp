#pragma once

#include <stdexcept>
#include <string>

namespace tempres {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModeIndexError : public Error {
public:
    using Error::Error;
};

class GridError : public Error {
public:
    using Error::Error;
};

// Out-of-domain physical parameter (sigma_t, gamma, crosstalk, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// A probability model violated its own invariants (e.g. negative probability).
class ModelError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Records on disk do not match the configured experiment grid.
class DataMismatchError : public Error {
public:
    using Error::Error;
};

// Filesystem failure: unreadable input, unwritable output directory.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace tempres
