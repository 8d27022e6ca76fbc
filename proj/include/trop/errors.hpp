#ifndef TROP_ERRORS_HPP
#define TROP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace trop {

/// Malformed or invalid input (parse errors, disconnected graphs,
/// nonpositive lengths, duplicate ids, infinite-length markers, ...).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// A hard resource cap was exceeded (lattice enumeration nodes,
/// unit-subdivision size, 2^g enumeration).
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace trop

#endif
