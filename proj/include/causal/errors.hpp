#pragma once

#include <stdexcept>
#include <string>

namespace causal {

// Correlation submatrix is numerically singular.
class degenerate_covariance_error : public std::runtime_error {
public:
    explicit degenerate_covariance_error(const std::string& what)
        : std::runtime_error(what) {}
};

// An enumeration-bounded operation was asked to exceed its cap.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or text.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace causal
