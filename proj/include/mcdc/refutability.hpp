#pragma once

#include <string>

#include "mcdc/ast.hpp"
#include "mcdc/types.hpp"

namespace mcdc {

/// How dynamic-slice patterns are classified. Verbatim keys direct
/// refutability on the absence of range children; Corrected keys it on
/// whether the pattern constrains the slice length.
enum class SliceRule { Verbatim, Corrected };

const char* to_string(SliceRule r);

/// Annotates every node of a typed pattern with its refutability class,
/// bottom-up. Returns the class of the root.
Refutability classify(Pattern& p, const TypeEnv& env, SliceRule rule = SliceRule::Verbatim);

enum class PatternRefutability { Refutable, Irrefutable };

/// Whole-pattern refutability of a classified pattern.
PatternRefutability pattern_refutability(const Pattern& p);

inline bool is_refutable(const Pattern& p) { return pattern_refutability(p) == PatternRefutability::Refutable; }

/// The node with every child replaced by `_` (`[_, _, _]`, `Some(_)`, `rest @ _`).
std::string node_label(const Pattern& p);

/// Indented tree, one node per line: label, kind and class.
std::string pattern_tree_text(const Pattern& p);

}  // namespace mcdc
