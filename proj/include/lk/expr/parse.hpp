#pragma once

#include "lk/expr/ast.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace lk {

struct ParseOptions {
    Interval ambient = unit_interval();
    // Value of the template variable `n`; unset means `n` is an unknown name.
    std::optional<long> n;
};

// Grammar errors throw ParseError carrying the 1-based column. Sets that
// escape the ambient interval throw DomainError.
SetExpr parse_set(std::string_view text, const ParseOptions& opts = {});
FuncExpr parse_func(std::string_view text, const ParseOptions& opts = {});

// Printed forms re-parse to structurally equal trees.
std::string print(const SetExpr& e);
std::string print(const FuncExpr& f);

}  // namespace lk
