// Error types shared by all modules. The CLI maps InvalidArgument and
// ValidationError to exit code 2, NumericalError to exit code 3.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace epr {

// Precondition violation: bad index, value outside its legal range, size
// mismatch, and so on.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure or physically impossible data: non-physical covariance,
// degenerate calibration, root-find without a bracket.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Aggregated configuration failure; carries one message per offending field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string all = "configuration invalid:";
        for (const auto& s : issues) {
            all += "\n  - ";
            all += s;
        }
        return all;
    }

    std::vector<std::string> issues_;
};

}  // namespace epr
