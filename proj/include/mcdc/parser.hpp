#pragma once

#include <string>
#include <string_view>

#include "mcdc/ast.hpp"

namespace mcdc {

/// Parses a whole `.rps` source file. Every node gets a span and a unique id.
Program parse_program(std::string_view source, const std::string& file = "<input>");

/// Parses a single pattern (top-level or-patterns allowed). Grouping
/// parentheses are kept as Grouped nodes. `&0..=5` is rejected as ambiguous.
Pattern parse_pattern(std::string_view source, const std::string& file = "<pattern>");

/// Parses a single expression; used for suite-manifest arguments.
Expr parse_expression(std::string_view source, const std::string& file = "<expr>");

TypeExpr parse_type(std::string_view source, const std::string& file = "<type>");

}  // namespace mcdc
