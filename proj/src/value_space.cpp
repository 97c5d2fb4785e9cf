#include "mcdc/value_space.hpp"

#include <algorithm>
#include <cstdlib>

namespace mcdc {

// ---------------------------------------------------------------------------
// IntervalSet
// ---------------------------------------------------------------------------

IntervalSet::IntervalSet(std::vector<Interval> intervals) : ivs_(std::move(intervals)) { normalize(); }

IntervalSet IntervalSet::single(std::int64_t lo, std::int64_t hi) {
  return lo > hi ? IntervalSet{} : IntervalSet({{lo, hi}});
}

void IntervalSet::normalize() {
  std::erase_if(ivs_, [](const Interval& iv) { return iv.first > iv.second; });
  std::sort(ivs_.begin(), ivs_.end());
  std::vector<Interval> merged;
  for (const auto& iv : ivs_) {
    if (!merged.empty() && (merged.back().second == INT64_MAX || iv.first <= merged.back().second + 1)) {
      merged.back().second = std::max(merged.back().second, iv.second);
    } else {
      merged.push_back(iv);
    }
  }
  ivs_ = std::move(merged);
}

bool IntervalSet::contains(std::int64_t v) const {
  auto it = std::upper_bound(ivs_.begin(), ivs_.end(), Interval{v, INT64_MAX});
  if (it == ivs_.begin()) return false;
  --it;
  return it->first <= v && v <= it->second;
}

std::uint64_t IntervalSet::size() const {
  std::uint64_t n = 0;
  for (const auto& [lo, hi] : ivs_) n += static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  return n;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  std::vector<Interval> all = ivs_;
  all.insert(all.end(), o.ivs_.begin(), o.ivs_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < ivs_.size() && j < o.ivs_.size()) {
    std::int64_t lo = std::max(ivs_[i].first, o.ivs_[j].first);
    std::int64_t hi = std::min(ivs_[i].second, o.ivs_[j].second);
    if (lo <= hi) out.push_back({lo, hi});
    if (ivs_[i].second < o.ivs_[j].second) ++i;
    else ++j;
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::subtract(const IntervalSet& o) const {
  std::vector<Interval> out;
  for (auto [lo, hi] : ivs_) {
    std::int64_t cur = lo;
    bool done = false;
    for (const auto& [blo, bhi] : o.ivs_) {
      if (bhi < cur || blo > hi) continue;
      if (blo > cur) out.push_back({cur, blo - 1});
      if (bhi >= hi) {
        done = true;
        break;
      }
      cur = std::max(cur, bhi + 1);
    }
    if (!done) out.push_back({cur, hi});
  }
  return IntervalSet(std::move(out));
}

std::int64_t IntervalSet::pick() const {
  std::int64_t best = ivs_.front().first;
  auto better = [](std::int64_t a, std::int64_t b) {
    auto mag = [](std::int64_t x) { return x < 0 ? 0 - static_cast<std::uint64_t>(x) : static_cast<std::uint64_t>(x); };
    auto ma = mag(a), mb = mag(b);
    return ma < mb || (ma == mb && a > b);
  };
  for (const auto& [lo, hi] : ivs_) {
    std::int64_t candidate = lo <= 0 && 0 <= hi ? 0 : (lo > 0 ? lo : hi);
    if (better(candidate, best)) best = candidate;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Product sets
// ---------------------------------------------------------------------------

namespace {

std::optional<Box> box_intersect(const Box& a, const Box& b) {
  Box out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    ValueSpace f = a[k].intersect(b[k]);
    if (f.is_empty()) return std::nullopt;
    out.push_back(std::move(f));
  }
  return out;
}

// a - b as disjoint boxes.
ProductSet box_minus(const Box& a, const Box& b) {
  if (!box_intersect(a, b)) return {a};
  ProductSet out;
  Box prefix;  // a_j ∩ b_j for j < k
  for (std::size_t k = 0; k < a.size(); ++k) {
    ValueSpace rest = a[k].subtract(b[k]);
    if (!rest.is_empty()) {
      Box piece = prefix;
      piece.push_back(std::move(rest));
      piece.insert(piece.end(), a.begin() + static_cast<std::ptrdiff_t>(k) + 1, a.end());
      out.push_back(std::move(piece));
    }
    prefix.push_back(a[k].intersect(b[k]));
  }
  return out;
}

ProductSet set_minus(const ProductSet& s, const ProductSet& t) {
  ProductSet cur = s;
  for (const Box& b : t) {
    ProductSet next;
    for (const Box& a : cur) {
      ProductSet pieces = box_minus(a, b);
      next.insert(next.end(), std::make_move_iterator(pieces.begin()), std::make_move_iterator(pieces.end()));
    }
    cur = std::move(next);
    if (cur.empty()) break;
  }
  return cur;
}

ProductSet set_union(const ProductSet& s, const ProductSet& t) {
  ProductSet out = s;
  ProductSet extra = set_minus(t, s);
  out.insert(out.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
  return out;
}

ProductSet set_intersect(const ProductSet& s, const ProductSet& t) {
  ProductSet out;
  for (const Box& a : s)
    for (const Box& b : t)
      if (auto i = box_intersect(a, b)) out.push_back(std::move(*i));
  return out;
}

bool box_contains(const Box& box, const std::vector<const Value*>& elems) {
  for (std::size_t k = 0; k < box.size(); ++k)
    if (!box[k].contains(*elems[k])) return false;
  return true;
}

bool set_contains(const ProductSet& s, const std::vector<const Value*>& elems) {
  return std::any_of(s.begin(), s.end(), [&](const Box& b) { return box_contains(b, elems); });
}

std::vector<const Value*> pointers(const std::vector<Value>& elems) {
  std::vector<const Value*> out;
  for (const auto& e : elems) out.push_back(&e);
  return out;
}

std::string set_str(const ProductSet& s) {
  std::string out;
  for (std::size_t b = 0; b < s.size(); ++b) {
    if (b) out += " | ";
    out += "(";
    for (std::size_t k = 0; k < s[b].size(); ++k) out += (k ? ", " : "") + s[b][k].str();
    out += ")";
  }
  return out.empty() ? "{}" : out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ValueSpace
// ---------------------------------------------------------------------------

ValueSpace ValueSpace::bools(bool has_false, bool has_true) {
  ValueSpace s;
  s.kind_ = Kind::Bool;
  s.bools_ = (has_false ? 1u : 0u) | (has_true ? 2u : 0u);
  return std::move(s).normalized();
}

ValueSpace ValueSpace::ints(IntervalSet set) {
  ValueSpace s;
  s.kind_ = Kind::Int;
  s.ints_ = std::move(set);
  return std::move(s).normalized();
}

ValueSpace ValueSpace::chars(IntervalSet set) {
  ValueSpace s;
  s.kind_ = Kind::Char;
  s.ints_ = std::move(set);
  return std::move(s).normalized();
}

ValueSpace ValueSpace::strs(StrSet set) {
  ValueSpace s;
  s.kind_ = Kind::Str;
  s.strs_ = std::move(set);
  return std::move(s).normalized();
}

ValueSpace ValueSpace::enumeration(std::map<int, ProductSet> variants) {
  ValueSpace s;
  s.kind_ = Kind::Enum;
  s.variants_ = std::move(variants);
  return std::move(s).normalized();
}

ValueSpace ValueSpace::product(ProductSet boxes) {
  ValueSpace s;
  s.kind_ = Kind::Product;
  s.boxes_ = std::move(boxes);
  return std::move(s).normalized();
}

ValueSpace ValueSpace::slice(std::vector<ProductSet> by_length, ProductSet tail, int prefix, int suffix,
                             ValueSpace element_top) {
  ValueSpace s;
  s.kind_ = Kind::Slice;
  s.by_length_ = std::move(by_length);
  s.boxes_ = std::move(tail);
  s.prefix_ = prefix;
  s.suffix_ = suffix;
  s.element_top_.push_back(std::move(element_top));
  return std::move(s).normalized();
}

ValueSpace ValueSpace::normalized() && {
  auto prune = [](ProductSet& set) {
    std::erase_if(set, [](const Box& b) {
      return std::any_of(b.begin(), b.end(), [](const ValueSpace& f) { return f.is_empty(); });
    });
  };
  bool empty = false;
  switch (kind_) {
    case Kind::Empty: return std::move(*this);
    case Kind::Bool: empty = bools_ == 0; break;
    case Kind::Int:
    case Kind::Char: empty = ints_.empty(); break;
    case Kind::Str: empty = strs_.empty(); break;
    case Kind::Enum:
      for (auto& [k, set] : variants_) prune(set);
      std::erase_if(variants_, [](const auto& kv) { return kv.second.empty(); });
      empty = variants_.empty();
      break;
    case Kind::Product:
      prune(boxes_);
      empty = boxes_.empty();
      break;
    case Kind::Slice:
      prune(boxes_);
      empty = boxes_.empty();
      for (auto& set : by_length_) {
        prune(set);
        empty = empty && set.empty();
      }
      break;
  }
  if (empty) return ValueSpace{};
  return std::move(*this);
}

namespace {

void require_same_kind(const ValueSpace& a, const ValueSpace& b, const char* op) {
  if (a.kind() != b.kind())
    throw SubtractionUnsupported(std::string("value spaces of different kinds in ") + op);
}

}  // namespace

ValueSpace ValueSpace::unite(const ValueSpace& o) const {
  if (is_empty()) return o;
  if (o.is_empty()) return *this;
  require_same_kind(*this, o, "union");
  ValueSpace out = *this;
  switch (kind_) {
    case Kind::Bool: out.bools_ |= o.bools_; break;
    case Kind::Int:
    case Kind::Char: out.ints_ = ints_.unite(o.ints_); break;
    case Kind::Str: {
      StrSet r;
      if (strs_.cofinite && o.strs_.cofinite) {
        r.cofinite = true;
        std::set_intersection(strs_.points.begin(), strs_.points.end(), o.strs_.points.begin(), o.strs_.points.end(),
                              std::inserter(r.points, r.points.end()));
      } else if (strs_.cofinite || o.strs_.cofinite) {
        const StrSet& co = strs_.cofinite ? strs_ : o.strs_;
        const StrSet& fin = strs_.cofinite ? o.strs_ : strs_;
        r.cofinite = true;
        std::set_difference(co.points.begin(), co.points.end(), fin.points.begin(), fin.points.end(),
                            std::inserter(r.points, r.points.end()));
      } else {
        r.points = strs_.points;
        r.points.insert(o.strs_.points.begin(), o.strs_.points.end());
      }
      out.strs_ = std::move(r);
      break;
    }
    case Kind::Enum:
      for (const auto& [v, set] : o.variants_) {
        auto it = out.variants_.find(v);
        if (it == out.variants_.end()) out.variants_.emplace(v, set);
        else it->second = set_union(it->second, set);
      }
      break;
    case Kind::Product: out.boxes_ = set_union(boxes_, o.boxes_); break;
    case Kind::Slice:
      out.boxes_ = set_union(boxes_, o.boxes_);
      for (std::size_t l = 0; l < by_length_.size(); ++l) out.by_length_[l] = set_union(by_length_[l], o.by_length_[l]);
      break;
    case Kind::Empty: break;
  }
  return std::move(out).normalized();
}

ValueSpace ValueSpace::intersect(const ValueSpace& o) const {
  if (is_empty() || o.is_empty()) return ValueSpace{};
  require_same_kind(*this, o, "intersection");
  ValueSpace out = *this;
  switch (kind_) {
    case Kind::Bool: out.bools_ &= o.bools_; break;
    case Kind::Int:
    case Kind::Char: out.ints_ = ints_.intersect(o.ints_); break;
    case Kind::Str: {
      StrSet r;
      if (strs_.cofinite && o.strs_.cofinite) {
        r.cofinite = true;
        r.points = strs_.points;
        r.points.insert(o.strs_.points.begin(), o.strs_.points.end());
      } else {
        const StrSet& fin = strs_.cofinite ? o.strs_ : strs_;
        const StrSet& other = strs_.cofinite ? strs_ : o.strs_;
        for (const auto& p : fin.points)
          if (other.contains(p)) r.points.insert(p);
      }
      out.strs_ = std::move(r);
      break;
    }
    case Kind::Enum: {
      std::map<int, ProductSet> vs;
      for (const auto& [v, set] : variants_)
        if (auto it = o.variants_.find(v); it != o.variants_.end()) vs.emplace(v, set_intersect(set, it->second));
      out.variants_ = std::move(vs);
      break;
    }
    case Kind::Product: out.boxes_ = set_intersect(boxes_, o.boxes_); break;
    case Kind::Slice:
      out.boxes_ = set_intersect(boxes_, o.boxes_);
      for (std::size_t l = 0; l < by_length_.size(); ++l)
        out.by_length_[l] = set_intersect(by_length_[l], o.by_length_[l]);
      break;
    case Kind::Empty: break;
  }
  return std::move(out).normalized();
}

ValueSpace ValueSpace::subtract(const ValueSpace& o) const {
  if (is_empty() || o.is_empty()) return *this;
  require_same_kind(*this, o, "subtraction");
  ValueSpace out = *this;
  switch (kind_) {
    case Kind::Bool: out.bools_ &= ~o.bools_; break;
    case Kind::Int:
    case Kind::Char: out.ints_ = ints_.subtract(o.ints_); break;
    case Kind::Str: {
      StrSet r;
      if (!strs_.cofinite) {
        for (const auto& p : strs_.points)
          if (!o.strs_.contains(p)) r.points.insert(p);
      } else if (!o.strs_.cofinite) {
        r.cofinite = true;
        r.points = strs_.points;
        r.points.insert(o.strs_.points.begin(), o.strs_.points.end());
      } else {
        // (U - A) - (U - B) = B - A
        for (const auto& p : o.strs_.points)
          if (!strs_.points.count(p)) r.points.insert(p);
      }
      out.strs_ = std::move(r);
      break;
    }
    case Kind::Enum:
      for (auto& [v, set] : out.variants_)
        if (auto it = o.variants_.find(v); it != o.variants_.end()) set = set_minus(set, it->second);
      break;
    case Kind::Product: out.boxes_ = set_minus(boxes_, o.boxes_); break;
    case Kind::Slice:
      out.boxes_ = set_minus(boxes_, o.boxes_);
      for (std::size_t l = 0; l < by_length_.size(); ++l) out.by_length_[l] = set_minus(by_length_[l], o.by_length_[l]);
      break;
    case Kind::Empty: break;
  }
  return std::move(out).normalized();
}

bool ValueSpace::contains(const Value& v) const {
  switch (kind_) {
    case Kind::Empty: return false;
    case Kind::Bool: return v.kind == Value::Kind::Bool && (v.b ? has_true() : has_false());
    case Kind::Int: return v.kind == Value::Kind::Int && ints_.contains(v.i);
    case Kind::Char: return v.kind == Value::Kind::Char && ints_.contains(static_cast<std::int64_t>(v.c));
    case Kind::Str: return v.kind == Value::Kind::Str && strs_.contains(v.s);
    case Kind::Enum: {
      if (v.kind != Value::Kind::Enum) return false;
      auto it = variants_.find(v.variant);
      return it != variants_.end() && set_contains(it->second, pointers(v.elems));
    }
    case Kind::Product: return set_contains(boxes_, pointers(v.elems));
    case Kind::Slice: {
      std::size_t len = v.elems.size();
      if (len < by_length_.size()) return set_contains(by_length_[len], pointers(v.elems));
      std::vector<const Value*> projected;
      for (int k = 0; k < prefix_; ++k) projected.push_back(&v.elems[static_cast<std::size_t>(k)]);
      for (int k = suffix_; k > 0; --k) projected.push_back(&v.elems[len - static_cast<std::size_t>(k)]);
      return set_contains(boxes_, projected);
    }
  }
  return false;
}

Value ValueSpace::witness(const TypePtr& type, const TypeEnv& env) const {
  const TypePtr& t = strip_refs(type);
  auto box_witness = [&](const Box& box, const std::vector<TypePtr>& ts) {
    std::vector<Value> elems;
    for (std::size_t k = 0; k < box.size(); ++k) elems.push_back(box[k].witness(ts[k], env));
    return elems;
  };
  switch (kind_) {
    case Kind::Empty: throw std::logic_error("witness of an empty value space");
    case Kind::Bool: return Value::boolean(!has_false());
    case Kind::Int: return Value::integer(ints_.pick());
    case Kind::Char: return Value::character(static_cast<char32_t>(ints_.intervals().front().first));
    case Kind::Str: {
      if (!strs_.cofinite) return Value::string(*strs_.points.begin());
      std::string s;
      while (strs_.points.count(s)) s += "a";
      return Value::string(s);
    }
    case Kind::Enum: {
      const auto& [v, set] = *variants_.begin();
      const auto& info = env.enum_info(*t);
      return Value::enumeration(info.variants[static_cast<std::size_t>(v)].name, v,
                                box_witness(set.front(), env.variant_fields(*t, v)));
    }
    case Kind::Product: {
      std::vector<TypePtr> ts;
      if (t->kind == Type::Kind::Struct) ts = env.struct_fields(*t);
      else if (t->kind == Type::Kind::Array) ts.assign(static_cast<std::size_t>(t->length), t->args[0]);
      else ts = t->args;
      auto elems = box_witness(boxes_.front(), ts);
      if (t->kind == Type::Kind::Struct) return Value::structure(t->name, std::move(elems));
      if (t->kind == Type::Kind::Array) return Value::array(std::move(elems));
      return Value::tuple(std::move(elems));
    }
    case Kind::Slice: {
      const TypePtr& elem = t->args[0];
      for (std::size_t l = 0; l < by_length_.size(); ++l) {
        if (by_length_[l].empty()) continue;
        std::vector<TypePtr> ts(l, elem);
        return Value::array(box_witness(by_length_[l].front(), ts));
      }
      std::vector<TypePtr> ts(static_cast<std::size_t>(prefix_ + suffix_), elem);
      auto ends = box_witness(boxes_.front(), ts);
      std::size_t len = std::max<std::size_t>(by_length_.size(), ends.size());
      std::vector<Value> elems(len, element_top_.front().witness(elem, env));
      for (int k = 0; k < prefix_; ++k) elems[static_cast<std::size_t>(k)] = ends[static_cast<std::size_t>(k)];
      for (int k = 0; k < suffix_; ++k)
        elems[len - static_cast<std::size_t>(suffix_) + static_cast<std::size_t>(k)] =
            ends[static_cast<std::size_t>(prefix_ + k)];
      return Value::array(std::move(elems));
    }
  }
  return Value{};
}

std::string ValueSpace::str() const {
  switch (kind_) {
    case Kind::Empty: return "Empty";
    case Kind::Bool: return std::string("BoolSet{") + (has_false() ? "f" : "") + (has_true() ? "t" : "") + "}";
    case Kind::Int:
    case Kind::Char: {
      std::string out = kind_ == Kind::Int ? "IntSet{" : "CharSet{";
      for (std::size_t k = 0; k < ints_.intervals().size(); ++k) {
        const auto& [lo, hi] = ints_.intervals()[k];
        out += (k ? "," : "") + std::string("[") + std::to_string(lo) + "," + std::to_string(hi) + "]";
      }
      return out + "}";
    }
    case Kind::Str: {
      std::string out = strs_.cofinite ? "StrTop-{" : "StrSet{";
      bool first = true;
      for (const auto& p : strs_.points) {
        out += (first ? "\"" : ",\"") + escape_string(p) + "\"";
        first = false;
      }
      return out + "}";
    }
    case Kind::Enum: {
      std::string out = "EnumSpace{";
      bool first = true;
      for (const auto& [v, set] : variants_) {
        out += (first ? "" : ", ") + std::to_string(v) + ": " + set_str(set);
        first = false;
      }
      return out + "}";
    }
    case Kind::Product: return "ProductSpace{" + set_str(boxes_) + "}";
    case Kind::Slice: {
      std::string out = "SliceSpace{";
      for (std::size_t l = 0; l < by_length_.size(); ++l)
        if (!by_length_[l].empty()) out += "len " + std::to_string(l) + ": " + set_str(by_length_[l]) + "; ";
      return out + "tail: " + set_str(boxes_) + "}";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Spaces of types, values and patterns
// ---------------------------------------------------------------------------

namespace {

const IntervalSet& char_domain() {
  static const IntervalSet d({{0, 0xD7FF}, {0xE000, 0x10FFFF}});
  return d;
}

Box top_box(const std::vector<TypePtr>& ts, const TypeEnv& env) {
  Box box;
  for (const auto& t : ts) box.push_back(value_space_of(t, env));
  return box;
}

std::vector<TypePtr> product_factor_types(const TypePtr& t, const TypeEnv& env) {
  if (t->kind == Type::Kind::Struct) return env.struct_fields(*t);
  if (t->kind == Type::Kind::Array) return std::vector<TypePtr>(static_cast<std::size_t>(t->length), t->args[0]);
  return t->args;
}

}  // namespace

ValueSpace value_space_of(const TypePtr& type, const TypeEnv& env) {
  const TypePtr& t = strip_refs(type);
  switch (t->kind) {
    case Type::Kind::Bool: return ValueSpace::bools(true, true);
    case Type::Kind::Int: return ValueSpace::ints(IntervalSet::single(t->int_min(), t->int_max()));
    case Type::Kind::Char: return ValueSpace::chars(char_domain());
    case Type::Kind::Str: return ValueSpace::strs(StrSet{true, {}});
    case Type::Kind::Enum: {
      std::map<int, ProductSet> vs;
      for (int v = 0; v < env.variant_count(*t); ++v) vs.emplace(v, ProductSet{top_box(env.variant_fields(*t, v), env)});
      return ValueSpace::enumeration(std::move(vs));
    }
    case Type::Kind::Struct:
    case Type::Kind::Tuple:
    case Type::Kind::Array: return ValueSpace::product({top_box(product_factor_types(t, env), env)});
    case Type::Kind::Slice: {
      const SliceShape& shape = env.slice_shape;
      ValueSpace elem = value_space_of(t->args[0], env);
      std::vector<ProductSet> by_length;
      for (int l = 0; l < shape.explicit_lengths(); ++l)
        by_length.push_back({Box(static_cast<std::size_t>(l), elem)});
      ProductSet tail{Box(static_cast<std::size_t>(shape.prefix + shape.suffix), elem)};
      return ValueSpace::slice(std::move(by_length), std::move(tail), shape.prefix, shape.suffix, elem);
    }
    case Type::Kind::Never:
    case Type::Kind::Param:
    case Type::Kind::Ref: return ValueSpace::empty();
  }
  return ValueSpace::empty();
}

ValueSpace space_of_value(const Value& v, const TypePtr& type, const TypeEnv& env) {
  const TypePtr& t = strip_refs(type);
  auto box_of = [&](const std::vector<Value>& elems, const std::vector<TypePtr>& ts) {
    Box box;
    for (std::size_t k = 0; k < elems.size(); ++k) box.push_back(space_of_value(elems[k], ts[k], env));
    return box;
  };
  switch (t->kind) {
    case Type::Kind::Bool: return ValueSpace::bools(!v.b, v.b);
    case Type::Kind::Int: return ValueSpace::ints(IntervalSet::single(v.i, v.i));
    case Type::Kind::Char:
      return ValueSpace::chars(IntervalSet::single(static_cast<std::int64_t>(v.c), static_cast<std::int64_t>(v.c)));
    case Type::Kind::Str: return ValueSpace::strs(StrSet{false, {v.s}});
    case Type::Kind::Enum:
      return ValueSpace::enumeration({{v.variant, ProductSet{box_of(v.elems, env.variant_fields(*t, v.variant))}}});
    case Type::Kind::Struct:
    case Type::Kind::Tuple:
    case Type::Kind::Array: return ValueSpace::product({box_of(v.elems, product_factor_types(t, env))});
    case Type::Kind::Slice: {
      const SliceShape& shape = env.slice_shape;
      std::size_t len = v.elems.size();
      if (len >= static_cast<std::size_t>(shape.explicit_lengths()))
        throw SubtractionUnsupported("slice constant longer than the tracked slice lengths");
      std::vector<ProductSet> by_length(static_cast<std::size_t>(shape.explicit_lengths()));
      by_length[len] = {box_of(v.elems, std::vector<TypePtr>(len, t->args[0]))};
      return ValueSpace::slice(std::move(by_length), {}, shape.prefix, shape.suffix, value_space_of(t->args[0], env));
    }
    default: return ValueSpace::empty();
  }
}

namespace {

bool is_rest_child(const Pattern& c) {
  return c.kind == PatternKind::Rest ||
         (c.kind == PatternKind::Identifier && !c.children.empty() && c.children[0].kind == PatternKind::Rest);
}

int rest_position(const std::vector<Pattern>& kids) {
  for (std::size_t k = 0; k < kids.size(); ++k)
    if (is_rest_child(kids[k])) return static_cast<int>(k);
  return -1;
}

// Box for a positional pattern over `ts`, with an optional rest child.
Box positional_box(const std::vector<Pattern>& kids, const std::vector<TypePtr>& ts, const TypeEnv& env) {
  Box box = top_box(ts, env);
  int rest = rest_position(kids);
  std::size_t n = kids.size();
  if (rest < 0) {
    for (std::size_t k = 0; k < n; ++k) box[k] = denotation(kids[k], env);
    return box;
  }
  auto r = static_cast<std::size_t>(rest);
  for (std::size_t k = 0; k < r; ++k) box[k] = denotation(kids[k], env);
  std::size_t suffix = n - r - 1;
  for (std::size_t j = 0; j < suffix; ++j) box[ts.size() - suffix + j] = denotation(kids[r + 1 + j], env);
  return box;
}

std::int64_t literal_scalar(const Literal& lit) {
  return lit.kind == Literal::Kind::Char ? static_cast<std::int64_t>(lit.c) : lit.i;
}

}  // namespace

ValueSpace denotation(const Pattern& p, const TypeEnv& env) {
  const TypePtr& t = strip_refs(p.type);
  switch (p.kind) {
    case PatternKind::Wildcard:
    case PatternKind::Rest: return value_space_of(t, env);
    case PatternKind::Identifier:
      return p.children.empty() ? value_space_of(t, env) : denotation(p.children[0], env);
    case PatternKind::Reference:
    case PatternKind::Grouped: return denotation(p.children[0], env);
    case PatternKind::Literal:
      switch (p.literal.kind) {
        case Literal::Kind::Bool: return ValueSpace::bools(!p.literal.b, p.literal.b);
        case Literal::Kind::Int: return ValueSpace::ints(IntervalSet::single(p.literal.i, p.literal.i));
        case Literal::Kind::Char: {
          auto c = static_cast<std::int64_t>(p.literal.c);
          return ValueSpace::chars(IntervalSet::single(c, c));
        }
        case Literal::Kind::Str: return ValueSpace::strs(StrSet{false, {p.literal.s}});
      }
      break;
    case PatternKind::Range: {
      bool is_char = t->kind == Type::Kind::Char;
      std::int64_t lo = p.lo ? literal_scalar(*p.lo) : (is_char ? 0 : t->int_min());
      std::int64_t hi = p.hi ? literal_scalar(*p.hi) : (is_char ? 0x10FFFF : t->int_max());
      if (p.hi && !p.inclusive) hi -= 1;
      IntervalSet set = IntervalSet::single(lo, hi);
      return is_char ? ValueSpace::chars(set.intersect(char_domain())) : ValueSpace::ints(set);
    }
    case PatternKind::Tuple: return ValueSpace::product({positional_box(p.children, t->args, env)});
    case PatternKind::TupleStruct:
    case PatternKind::Struct:
    case PatternKind::Path: {
      if (p.meaning == PatternMeaning::Const) return space_of_value(*p.const_value, t, env);
      std::vector<TypePtr> ts =
          t->kind == Type::Kind::Enum ? env.variant_fields(*t, p.variant) : env.struct_fields(*t);
      Box box;
      if (p.kind == PatternKind::Struct) {
        box = top_box(ts, env);
        for (std::size_t k = 0; k < p.children.size(); ++k)
          box[static_cast<std::size_t>(p.field_index[k])] = denotation(p.children[k], env);
      } else if (p.kind == PatternKind::TupleStruct) {
        box = positional_box(p.children, ts, env);
      }
      if (t->kind == Type::Kind::Enum) return ValueSpace::enumeration({{p.variant, ProductSet{box}}});
      return ValueSpace::product({box});
    }
    case PatternKind::Slice: {
      const TypePtr& elem = t->args[0];
      if (t->kind == Type::Kind::Array) {
        std::vector<TypePtr> ts(static_cast<std::size_t>(t->length), elem);
        return ValueSpace::product({positional_box(p.children, ts, env)});
      }
      const SliceShape& shape = env.slice_shape;
      ValueSpace elem_top = value_space_of(elem, env);
      auto L = static_cast<std::size_t>(shape.explicit_lengths());
      std::vector<ProductSet> by_length(L);
      ProductSet tail;
      int rest = rest_position(p.children);
      std::size_t n = p.children.size();
      if (rest < 0) {
        if (n < L) by_length[n] = {positional_box(p.children, std::vector<TypePtr>(n, elem), env)};
      } else {
        std::size_t fixed = n - 1;
        for (std::size_t l = fixed; l < L; ++l)
          by_length[l] = {positional_box(p.children, std::vector<TypePtr>(l, elem), env)};
        // Tail: factors are the first P and the last S elements.
        auto r = static_cast<std::size_t>(rest);
        auto P = static_cast<std::size_t>(shape.prefix), S = static_cast<std::size_t>(shape.suffix);
        Box box(P + S, elem_top);
        for (std::size_t k = 0; k < r; ++k) box[k] = denotation(p.children[k], env);
        std::size_t suffix = n - r - 1;
        for (std::size_t j = 0; j < suffix; ++j) box[P + S - suffix + j] = denotation(p.children[r + 1 + j], env);
        tail.push_back(std::move(box));
      }
      return ValueSpace::slice(std::move(by_length), std::move(tail), shape.prefix, shape.suffix, elem_top);
    }
    case PatternKind::Or: {
      ValueSpace out;
      for (const auto& c : p.children) out = out.unite(denotation(c, env));
      return out;
    }
  }
  return ValueSpace::empty();
}

ValueSpace space_subtract(const ValueSpace& a, const ValueSpace& b) { return a.subtract(b); }

bool is_top(const ValueSpace& s, const TypePtr& t, const TypeEnv& env) {
  return value_space_of(t, env).subtract(s).is_empty();
}

ExhaustivenessResult check_exhaustive(const std::vector<const Pattern*>& arms, const std::vector<bool>& guarded,
                                      const TypePtr& scrutinee, const TypeEnv& env) {
  ValueSpace remaining = value_space_of(scrutinee, env);
  for (std::size_t k = 0; k < arms.size() && !remaining.is_empty(); ++k)
    if (!guarded[k]) remaining = remaining.subtract(denotation(*arms[k], env));
  ExhaustivenessResult out;
  if (remaining.is_empty()) return out;
  out.exhaustive = false;
  out.witness = remaining.witness(scrutinee, env);
  out.witness_text = env.format_value(*out.witness, scrutinee);
  return out;
}

ExhaustivenessResult check_exhaustive(const Expr& match_expr, const TypeEnv& env) {
  std::vector<const Pattern*> arms;
  std::vector<bool> guarded;
  for (const auto& arm : match_expr.arms) {
    arms.push_back(&arm.pattern);
    guarded.push_back(arm.guard.has_value());
  }
  return check_exhaustive(arms, guarded, match_expr.kids[0].type, env);
}

}  // namespace mcdc
