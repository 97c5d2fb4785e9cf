#include "mcdc/refutability.hpp"

#include <algorithm>
#include <stdexcept>

#include "mcdc/value_space.hpp"

namespace mcdc {

const char* to_string(SliceRule r) { return r == SliceRule::Verbatim ? "verbatim" : "corrected"; }

namespace {

bool refutable(Refutability r) { return r != Refutability::Irrefutable; }

// Irrefutable when every child is, otherwise indirectly refutable.
Refutability from_children(const std::vector<Refutability>& kids) {
  return std::any_of(kids.begin(), kids.end(), refutable) ? Refutability::IndirectlyRefutable
                                                          : Refutability::Irrefutable;
}

bool is_rest_child(const Pattern& c) {
  return c.kind == PatternKind::Rest ||
         (c.kind == PatternKind::Identifier && !c.children.empty() && c.children[0].kind == PatternKind::Rest);
}

Refutability classify_node(const Pattern& p, const std::vector<Refutability>& kids, const TypeEnv& env,
                           SliceRule rule) {
  const TypePtr& t = strip_refs(p.type);
  switch (p.kind) {
    case PatternKind::Literal: return Refutability::DirectlyRefutable;
    case PatternKind::Identifier: return from_children(kids);
    case PatternKind::Wildcard:
    case PatternKind::Rest: return Refutability::Irrefutable;
    case PatternKind::Range:
      return is_top(denotation(p, env), t, env) ? Refutability::Irrefutable : Refutability::DirectlyRefutable;
    case PatternKind::Reference:
    case PatternKind::Grouped:
    case PatternKind::Tuple: return from_children(kids);
    case PatternKind::Struct:
    case PatternKind::TupleStruct:
      if (t->kind == Type::Kind::Enum && env.variant_count(*t) > 1) return Refutability::DirectlyRefutable;
      return from_children(kids);
    case PatternKind::Path:
      switch (p.meaning) {
        case PatternMeaning::Const: return Refutability::DirectlyRefutable;
        case PatternMeaning::EnumVariant:
          return env.variant_count(*t) > 1 ? Refutability::DirectlyRefutable : Refutability::Irrefutable;
        default: return Refutability::Irrefutable;
      }
    case PatternKind::Slice: {
      if (t->kind == Type::Kind::Array) return from_children(kids);
      if (rule == SliceRule::Verbatim) {
        bool has_range = std::any_of(p.children.begin(), p.children.end(),
                                     [](const Pattern& c) { return c.kind == PatternKind::Range; });
        return has_range ? from_children(kids) : Refutability::DirectlyRefutable;
      }
      bool any_length = p.children.size() == 1 && is_rest_child(p.children[0]);
      return any_length ? from_children(kids) : Refutability::DirectlyRefutable;
    }
    case PatternKind::Or: {
      if (!std::all_of(kids.begin(), kids.end(), refutable)) return Refutability::Irrefutable;
      return is_top(denotation(p, env), t, env) ? Refutability::Irrefutable : Refutability::IndirectlyRefutable;
    }
  }
  throw std::logic_error("unknown pattern kind");
}

}  // namespace

Refutability classify(Pattern& p, const TypeEnv& env, SliceRule rule) {
  std::vector<Refutability> kids;
  for (auto& c : p.children) kids.push_back(classify(c, env, rule));
  Refutability r = classify_node(p, kids, env, rule);
  p.refutability = r;
  return r;
}

PatternRefutability pattern_refutability(const Pattern& p) {
  if (!p.refutability) throw std::logic_error("pattern_refutability on an unclassified pattern");
  return *p.refutability == Refutability::Irrefutable ? PatternRefutability::Irrefutable
                                                      : PatternRefutability::Refutable;
}

std::string node_label(const Pattern& p) {
  auto holes = [](std::size_t n) {
    std::string out;
    for (std::size_t k = 0; k < n; ++k) out += k ? ", _" : "_";
    return out;
  };
  switch (p.kind) {
    case PatternKind::Literal: return p.literal.str();
    case PatternKind::Identifier: {
      std::string out = std::string(p.by_ref ? "ref " : "") + (p.is_mut ? "mut " : "") + p.name;
      return p.children.empty() ? out : out + " @ _";
    }
    case PatternKind::Wildcard: return "_";
    case PatternKind::Rest: return "..";
    case PatternKind::Range: {
      std::string out = p.lo ? p.lo->str() : "";
      out += p.inclusive ? "..=" : "..";
      return p.hi ? out + p.hi->str() : out;
    }
    case PatternKind::Reference: return p.is_mut ? "&mut _" : "&_";
    case PatternKind::Grouped: return "(_)";
    case PatternKind::Tuple: return p.children.size() == 1 ? "(_,)" : "(" + holes(p.children.size()) + ")";
    case PatternKind::TupleStruct: return path_str(p.path) + "(" + holes(p.children.size()) + ")";
    case PatternKind::Struct: {
      std::string out = path_str(p.path) + " {";
      for (std::size_t k = 0; k < p.fields.size(); ++k) out += (k ? ", " : " ") + p.fields[k] + ": _";
      if (p.has_rest) out += p.fields.empty() ? " .." : ", ..";
      return out + " }";
    }
    case PatternKind::Slice: return "[" + holes(p.children.size()) + "]";
    case PatternKind::Path: return path_str(p.path);
    case PatternKind::Or: {
      std::string out;
      for (std::size_t k = 0; k < p.children.size(); ++k) out += k ? " | _" : "_";
      return out;
    }
  }
  return "?";
}

namespace {

void tree_lines(const Pattern& p, int depth, std::string& out) {
  out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + node_label(p) + "  " + to_string(p.kind);
  if (p.refutability) out += "  " + std::string(to_string(*p.refutability));
  out += "\n";
  for (const auto& c : p.children) tree_lines(c, depth + 1, out);
}

}  // namespace

std::string pattern_tree_text(const Pattern& p) {
  std::string out;
  tree_lines(p, 0, out);
  return out;
}

}  // namespace mcdc
