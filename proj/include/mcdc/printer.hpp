#pragma once

#include <string>

#include "mcdc/ast.hpp"

namespace mcdc {

/// Source-form pretty printers. Output re-parses to a structurally equal AST.
std::string print_program(const Program& program);
std::string print_item(const Item& item);
std::string print_pattern(const Pattern& pattern);
std::string print_expr(const Expr& expr);
std::string print_type(const TypeExpr& type);

/// Span- and id-free structural dump. Two ASTs are structurally equal iff
/// their dumps are equal.
std::string dump(const Program& program);
std::string dump(const Pattern& pattern);
std::string dump(const Expr& expr);

}  // namespace mcdc
