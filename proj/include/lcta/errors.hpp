#pragma once

#include <stdexcept>
#include <string>

namespace lcta {

// Base class for every error this library raises on bad input or bad state.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data. CLI maps this family to exit code 1.
class DataError : public Error {
public:
    using Error::Error;
};

// Structurally broken input file (ragged rows, bad cell codes, bad header).
class FormatError : public DataError {
public:
    using DataError::DataError;
};

// Duplicate identifier where uniqueness is required.
class DuplicateError : public DataError {
public:
    using DataError::DataError;
};

// Empty file or empty input collection where content is required.
class EmptyInputError : public DataError {
public:
    using DataError::DataError;
};

// Dimension mismatch between arguments that must agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Scalar argument outside its documented domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Invalid configuration or request (unknown factor, bad flag combination).
// CLI maps this family to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Linearly dependent design column; message names the column.
class CollinearityError : public DataError {
public:
    using DataError::DataError;
};

// Labels contain a single class where both are required.
class DegenerateLabelsError : public DataError {
public:
    using DataError::DataError;
};

// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace lcta
