#pragma once

#include <memory>
#include <string>

#include "mvset/grid.hpp"

namespace mvset {

/// Small arithmetic expression in the chart coordinates x and y.
///
/// Grammar: numbers, `x`, `y`, `pi`, `e`, binary `+ - * / ^` (`^` is right
/// associative), unary minus, parentheses, and the functions sin, cos, tan,
/// exp, log, sqrt, abs, pos (positive part), min(a,b), max(a,b).
/// Parse errors raise ConfigError.
class Expression {
public:
    explicit Expression(const std::string& source);

    double operator()(Point p) const;
    const std::string& source() const { return source_; }

    struct Node;

private:
    std::string source_;
    std::shared_ptr<const Node> root_;
};

}  // namespace mvset
