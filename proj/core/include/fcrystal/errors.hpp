#pragma once

#include <stdexcept>
#include <string>

namespace fcrystal {

/// Result valuation cannot be certified at the working precision.
class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

/// A series failed to gain valuation at the rate its slope data promises.
class divergence_error : public std::runtime_error {
public:
    explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration exceeded a caller-supplied element budget.
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fcrystal
