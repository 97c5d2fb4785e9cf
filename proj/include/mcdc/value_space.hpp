#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcdc/types.hpp"

namespace mcdc {

/// Sorted, disjoint, non-adjacent closed intervals.
class IntervalSet {
 public:
  using Interval = std::pair<std::int64_t, std::int64_t>;

  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet single(std::int64_t lo, std::int64_t hi);

  const std::vector<Interval>& intervals() const { return ivs_; }
  bool empty() const { return ivs_.empty(); }
  bool contains(std::int64_t v) const;
  std::uint64_t size() const;

  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet intersect(const IntervalSet& o) const;
  IntervalSet subtract(const IntervalSet& o) const;

  /// Member closest to zero, preferring the non-negative one on ties.
  std::int64_t pick() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> ivs_;
  void normalize();
};

/// Finite set of strings, or the complement of one.
struct StrSet {
  bool cofinite = false;
  std::set<std::string> points;

  bool empty() const { return !cofinite && points.empty(); }
  bool contains(const std::string& s) const { return cofinite != (points.count(s) > 0); }
  friend bool operator==(const StrSet&, const StrSet&) = default;
};

class ValueSpace;

/// Union of boxes; each box is a product of factor spaces of equal arity.
/// Boxes are kept pairwise disjoint.
using Box = std::vector<ValueSpace>;
using ProductSet = std::vector<Box>;

class SubtractionUnsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Exact denotation of a set of values of one type.
class ValueSpace {
 public:
  enum class Kind { Empty, Bool, Int, Char, Str, Enum, Product, Slice };

  ValueSpace() = default;

  static ValueSpace empty() { return ValueSpace{}; }
  static ValueSpace bools(bool has_false, bool has_true);
  static ValueSpace ints(IntervalSet set);
  static ValueSpace chars(IntervalSet set);
  static ValueSpace strs(StrSet set);
  static ValueSpace enumeration(std::map<int, ProductSet> variants);
  static ValueSpace product(ProductSet boxes);
  /// `by_length[l]` holds slices of length l; `tail` holds every longer slice,
  /// projected onto its first `prefix` and last `suffix` elements.
  static ValueSpace slice(std::vector<ProductSet> by_length, ProductSet tail, int prefix, int suffix,
                          ValueSpace element_top);

  Kind kind() const { return kind_; }
  bool is_empty() const { return kind_ == Kind::Empty; }

  const IntervalSet& interval_set() const { return ints_; }
  bool has_false() const { return bools_ & 1; }
  bool has_true() const { return bools_ & 2; }
  const StrSet& str_set() const { return strs_; }
  const std::map<int, ProductSet>& variants() const { return variants_; }
  const ProductSet& boxes() const { return boxes_; }
  const std::vector<ProductSet>& by_length() const { return by_length_; }
  const ProductSet& tail() const { return boxes_; }
  int prefix() const { return prefix_; }
  int suffix() const { return suffix_; }

  ValueSpace unite(const ValueSpace& o) const;
  ValueSpace intersect(const ValueSpace& o) const;
  /// Exact set difference. Throws SubtractionUnsupported when the operands
  /// describe different kinds of values.
  ValueSpace subtract(const ValueSpace& o) const;

  bool contains(const Value& v) const;

  /// Some member of a non-empty space: first variant in declaration order,
  /// integers nearest zero, shortest slices.
  Value witness(const TypePtr& type, const TypeEnv& env) const;

  std::string str() const;

 private:
  Kind kind_ = Kind::Empty;
  unsigned bools_ = 0;
  IntervalSet ints_;
  StrSet strs_;
  std::map<int, ProductSet> variants_;
  ProductSet boxes_;  // Product boxes, or the Slice tail
  std::vector<ProductSet> by_length_;
  int prefix_ = 0;
  int suffix_ = 0;
  std::vector<ValueSpace> element_top_;  // Slice: one entry, fills the middle of tail witnesses

  ValueSpace normalized() &&;
};

/// The full space of `t` ("Top").
ValueSpace value_space_of(const TypePtr& t, const TypeEnv& env);

/// The singleton space {v} for a value of type t.
ValueSpace space_of_value(const Value& v, const TypePtr& t, const TypeEnv& env);

/// Exactly the values a typed pattern matches.
ValueSpace denotation(const Pattern& p, const TypeEnv& env);

ValueSpace space_subtract(const ValueSpace& a, const ValueSpace& b);

bool is_top(const ValueSpace& s, const TypePtr& t, const TypeEnv& env);

/// Result of check_exhaustive: empty witness means exhaustive.
struct ExhaustivenessResult {
  bool exhaustive = true;
  std::optional<Value> witness;
  std::string witness_text;
};

/// `arms` are typed arm patterns; `guarded[k]` marks arms with a guard, which
/// do not count towards exhaustiveness.
ExhaustivenessResult check_exhaustive(const std::vector<const Pattern*>& arms, const std::vector<bool>& guarded,
                                      const TypePtr& scrutinee, const TypeEnv& env);
ExhaustivenessResult check_exhaustive(const Expr& match_expr, const TypeEnv& env);

}  // namespace mcdc
