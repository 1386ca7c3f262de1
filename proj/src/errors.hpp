#ifndef QBRAIN_ERRORS_HPP
#define QBRAIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbrain {

// Error taxonomy mirrors the process exit codes used by the CLI and the C API:
// validation 2, numerical 3, capacity 4.

class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qbrain

#endif
