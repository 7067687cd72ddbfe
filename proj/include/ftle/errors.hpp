#pragma once

#include <stdexcept>
#include <string>

namespace ftle {

/// Base class for all errors thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Message carries "<path>:<line>: <reason>".
class parse_error : public error {
public:
    parse_error(const std::string& path, long line, const std::string& reason)
        : error(path + ":" + std::to_string(line) + ": " + reason),
          path_(path), line_(line) {}

    const std::string& path() const noexcept { return path_; }
    long line() const noexcept { return line_; }

private:
    std::string path_;
    long line_;
};

/// A point has no strict neighbor on either side of some axis, so the
/// finite-difference divisor along that axis would be zero.
class degenerate_neighborhood_error : public error {
public:
    using error::error;
};

/// Eigenvalue routine received a matrix that is not symmetric within
/// the roundoff tolerance.
class asymmetric_matrix_error : public error {
public:
    using error::error;
};

/// Requested device split violates the partition preconditions.
class invalid_partition_error : public error {
public:
    using error::error;
};

/// Trajectory integration produced a non-finite state.
class integration_diverged_error : public error {
public:
    using error::error;
};

} // namespace ftle
