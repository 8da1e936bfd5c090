#pragma once

#include <stdexcept>
#include <string>

namespace mvset {

/// Base class for every error raised by the library. The category maps
/// onto the CLI exit code.
class Error : public std::runtime_error {
public:
    enum class Category { config = 2, geometry = 3, precondition = 4, solver = 5 };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    Category category_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(Category::config, what) {}
};

/// Margin violations, box too small, out-of-bounds sampling.
struct GeometryError : Error {
    explicit GeometryError(const std::string& what) : Error(Category::geometry, what) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error(Category::precondition, what) {}
};

/// Iteration caps, certification failures, non-monotone predicates.
struct SolverError : Error {
    explicit SolverError(const std::string& what) : Error(Category::solver, what) {}
};

}  // namespace mvset
