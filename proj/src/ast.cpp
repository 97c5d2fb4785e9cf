#include "mcdc/ast.hpp"

namespace mcdc {

std::string Literal::str() const {
  switch (kind) {
    case Kind::Bool: return b ? "true" : "false";
    case Kind::Int: return std::to_string(i);
    case Kind::Char: return "'" + escape_char(c) + "'";
    case Kind::Str: return "\"" + escape_string(s) + "\"";
  }
  return "?";
}

std::string path_str(const Path& p) {
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) out += "::";
    out += p[k];
  }
  return out;
}

const char* to_string(PatternKind k) {
  switch (k) {
    case PatternKind::Literal: return "Literal";
    case PatternKind::Identifier: return "Identifier";
    case PatternKind::Wildcard: return "Wildcard";
    case PatternKind::Rest: return "Rest";
    case PatternKind::Range: return "Range";
    case PatternKind::Reference: return "Reference";
    case PatternKind::Struct: return "Struct";
    case PatternKind::TupleStruct: return "TupleStruct";
    case PatternKind::Tuple: return "Tuple";
    case PatternKind::Grouped: return "Grouped";
    case PatternKind::Slice: return "Slice";
    case PatternKind::Path: return "Path";
    case PatternKind::Or: return "Or";
  }
  return "?";
}

const char* to_string(Refutability r) {
  switch (r) {
    case Refutability::DirectlyRefutable: return "DirectlyRefutable";
    case Refutability::IndirectlyRefutable: return "IndirectlyRefutable";
    case Refutability::Irrefutable: return "Irrefutable";
  }
  return "?";
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Rem: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

bool is_logical(BinaryOp op) { return op == BinaryOp::And || op == BinaryOp::Or; }

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return true;
    default: return false;
  }
}

const std::string& item_name(const Item& item) {
  return std::visit([](const auto& def) -> const std::string& { return def.name; }, item);
}

const SourceSpan& item_span(const Item& item) {
  return std::visit([](const auto& def) -> const SourceSpan& { return def.span; }, item);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mcdc
