#include "mcdc/runtime.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "mcdc/format.hpp"
#include "mcdc/parser.hpp"

namespace mcdc {

// ---------------------------------------------------------------------------
// Trace
// ---------------------------------------------------------------------------

std::string EvaluationVector::pattern() const {
  std::string out;
  for (const auto& c : conds) out += !c ? '-' : *c ? 'T' : 'F';
  return out;
}

namespace {

// NotEvaluated < False < True, matching the `-` / `F` / `T` spelling order.
int rank(const TriState& t) { return !t ? 0 : *t ? 2 : 1; }

bool vector_less(const EvaluationVector& a, const EvaluationVector& b) {
  if (a.decision != b.decision) return a.decision < b.decision;
  if (a.conds.size() != b.conds.size()) return a.conds.size() < b.conds.size();
  for (std::size_t k = 0; k < a.conds.size(); ++k)
    if (rank(a.conds[k]) != rank(b.conds[k])) return rank(a.conds[k]) < rank(b.conds[k]);
  return a.outcome < b.outcome;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

}  // namespace

void Trace::canonicalize() {
  std::stable_sort(vectors.begin(), vectors.end(), vector_less);
  for (std::size_t k = 0; k < vectors.size(); ++k) vectors[k].seq = k;
}

void Trace::merge(const Trace& other) {
  if (program_hash == 0) program_hash = other.program_hash;
  vectors.insert(vectors.end(), other.vectors.begin(), other.vectors.end());
  statements.insert(other.statements.begin(), other.statements.end());
  entries.insert(other.entries.begin(), other.entries.end());
  exits.insert(other.exits.begin(), other.exits.end());
  canonicalize();
}

std::string Trace::to_jsonl() const {
  using nlohmann::json;
  std::string out = json{{"program_hash", hex64(program_hash)}}.dump() + "\n";
  for (const auto& v : vectors) {
    json conds = json::array();
    for (const auto& c : v.conds) conds.push_back(!c ? "-" : *c ? "T" : "F");
    out += json{{"decision", v.decision}, {"conds", conds}, {"outcome", v.outcome}, {"seq", v.seq}}.dump() + "\n";
  }
  for (int s : statements) out += json{{"statement", s}}.dump() + "\n";
  for (const auto& e : entries) out += json{{"entry", e}}.dump() + "\n";
  for (int x : exits) out += json{{"exit", x}}.dump() + "\n";
  return out;
}

Trace Trace::from_jsonl(const std::string& text) {
  using nlohmann::json;
  Trace t;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& what) {
      throw TraceFormatError("trace line " + std::to_string(line_no) + ": " + what);
    };
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail("not a JSON object");
    try {
      if (j.contains("program_hash")) {
        t.program_hash = std::stoull(j.at("program_hash").get<std::string>(), nullptr, 16);
        header = true;
      } else if (j.contains("decision")) {
        EvaluationVector v;
        v.decision = j.at("decision").get<int>();
        v.outcome = j.at("outcome").get<bool>();
        v.seq = j.at("seq").get<std::uint64_t>();
        for (const auto& c : j.at("conds")) {
          std::string s = c.get<std::string>();
          if (s == "T") v.conds.emplace_back(true);
          else if (s == "F") v.conds.emplace_back(false);
          else if (s == "-") v.conds.emplace_back(std::nullopt);
          else fail("condition outcome must be \"T\", \"F\" or \"-\"");
        }
        t.vectors.push_back(std::move(v));
      } else if (j.contains("statement")) {
        t.statements.insert(j.at("statement").get<int>());
      } else if (j.contains("entry")) {
        t.entries.insert(j.at("entry").get<std::string>());
      } else if (j.contains("exit")) {
        t.exits.insert(j.at("exit").get<int>());
      } else {
        fail("unknown record");
      }
    } catch (const json::exception& e) {
      fail(e.what());
    } catch (const std::logic_error& e) {
      fail(e.what());
    }
  }
  if (!header) throw TraceFormatError("trace has no program_hash header");
  return t;
}

// ---------------------------------------------------------------------------
// Suite manifests
// ---------------------------------------------------------------------------

std::vector<TestCase> load_suite(const std::string& manifest_json, const TypedProgram& program) {
  using nlohmann::json;
  json doc = json::parse(manifest_json, nullptr, false);
  if (doc.is_discarded()) throw SuiteError("suite manifest is not valid JSON");
  if (!doc.is_object() || !doc.contains("tests") || !doc["tests"].is_array())
    throw SuiteError("suite manifest must be an object with a \"tests\" array");
  const TypeEnv& env = *program.env;
  std::vector<TestCase> out;
  std::set<std::string> names;
  for (const auto& t : doc["tests"]) {
    try {
      TestCase tc;
      tc.name = t.at("name").get<std::string>();
      tc.entry = t.at("entry").get<std::string>();
      if (t.contains("args"))
        for (const auto& a : t.at("args")) tc.arg_sources.push_back(a.get<std::string>());
      if (t.contains("expect")) tc.expect_source = t.at("expect").get<std::string>();
      if (t.contains("expect_output")) tc.expect_output = t.at("expect_output").get<std::string>();
      if (!names.insert(tc.name).second) throw SuiteError("duplicate test name `" + tc.name + "`");
      auto fn = env.functions.find(tc.entry);
      if (fn == env.functions.end())
        throw SuiteError("test `" + tc.name + "`: unknown entry function `" + tc.entry + "`");
      const FunctionInfo& info = fn->second;
      if (tc.arg_sources.size() != info.params.size())
        throw SuiteError("test `" + tc.name + "`: `" + tc.entry + "` takes " + std::to_string(info.params.size()) +
                         " arguments, manifest gives " + std::to_string(tc.arg_sources.size()));
      for (std::size_t k = 0; k < info.params.size(); ++k)
        tc.args.push_back(constant_from_source(tc.arg_sources[k], info.params[k], env));
      if (tc.expect_source) tc.expect = constant_from_source(*tc.expect_source, info.result, env);
      out.push_back(std::move(tc));
    } catch (const json::exception& e) {
      throw SuiteError(std::string("malformed test entry: ") + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pattern matching
// ---------------------------------------------------------------------------

namespace {

using Bindings = std::vector<std::pair<std::string, Value>>;
using Recorder = std::function<void(const Pattern&, bool)>;

bool is_rest(const Pattern& c) {
  return c.kind == PatternKind::Rest ||
         (c.kind == PatternKind::Identifier && !c.children.empty() && c.children[0].kind == PatternKind::Rest);
}

std::int64_t scalar(const Value& v) { return v.kind == Value::Kind::Char ? static_cast<std::int64_t>(v.c) : v.i; }

std::int64_t scalar(const Literal& l) { return l.kind == Literal::Kind::Char ? static_cast<std::int64_t>(l.c) : l.i; }

class Matcher {
 public:
  explicit Matcher(const Recorder* rec) : rec_(rec) {}

  bool match(const Pattern& p, const Value& v, Bindings& out) {
    bool own = own_test(p, v);
    if (rec_) (*rec_)(p, own);
    if (!own) return false;
    switch (p.kind) {
      case PatternKind::Literal:
      case PatternKind::Wildcard:
      case PatternKind::Rest:
      case PatternKind::Range:
      case PatternKind::Path: return true;
      case PatternKind::Identifier:
        if (!p.children.empty() && !match(p.children[0], v, out)) return false;
        out.emplace_back(p.name, v);
        return true;
      case PatternKind::Reference:
      case PatternKind::Grouped: return match(p.children[0], v, out);
      case PatternKind::Tuple:
      case PatternKind::TupleStruct: return positional(p, v.elems, out);
      case PatternKind::Struct:
        for (std::size_t k = 0; k < p.children.size(); ++k)
          if (!match(p.children[k], v.elems.at(static_cast<std::size_t>(p.field_index[k])), out)) return false;
        return true;
      case PatternKind::Slice: return slice(p, v, out);
      case PatternKind::Or:
        for (const auto& alt : p.children) {
          Bindings b;
          if (match(alt, v, b)) {
            for (auto& x : b) out.push_back(std::move(x));
            return true;
          }
        }
        return false;
    }
    return false;
  }

 private:
  const Recorder* rec_;

  static bool own_test(const Pattern& p, const Value& v) {
    switch (p.kind) {
      case PatternKind::Literal:
        switch (p.literal.kind) {
          case Literal::Kind::Bool: return v.b == p.literal.b;
          case Literal::Kind::Int: return v.i == p.literal.i;
          case Literal::Kind::Char: return v.c == p.literal.c;
          case Literal::Kind::Str: return v.s == p.literal.s;
        }
        return false;
      case PatternKind::Range: {
        std::int64_t x = scalar(v);
        if (p.lo && x < scalar(*p.lo)) return false;
        if (p.hi && (p.inclusive ? x > scalar(*p.hi) : x >= scalar(*p.hi))) return false;
        return true;
      }
      case PatternKind::Path:
        if (p.meaning == PatternMeaning::Const) return v == *p.const_value;
        if (p.meaning == PatternMeaning::EnumVariant) return v.variant == p.variant;
        return true;
      case PatternKind::Struct:
      case PatternKind::TupleStruct: return p.variant < 0 || v.variant == p.variant;
      case PatternKind::Slice: {
        std::size_t n = p.children.size();
        bool rest = std::any_of(p.children.begin(), p.children.end(), is_rest);
        return rest ? v.elems.size() >= n - 1 : v.elems.size() == n;
      }
      default: return true;
    }
  }

  bool positional(const Pattern& p, const std::vector<Value>& elems, Bindings& out) {
    auto r = std::find_if(p.children.begin(), p.children.end(),
                          [](const Pattern& c) { return c.kind == PatternKind::Rest; });
    if (r == p.children.end()) {
      for (std::size_t k = 0; k < p.children.size(); ++k)
        if (!match(p.children[k], elems[k], out)) return false;
      return true;
    }
    auto at = static_cast<std::size_t>(r - p.children.begin());
    for (std::size_t k = 0; k < at; ++k)
      if (!match(p.children[k], elems[k], out)) return false;
    std::size_t suffix = p.children.size() - at - 1;
    for (std::size_t j = 0; j < suffix; ++j)
      if (!match(p.children[at + 1 + j], elems[elems.size() - suffix + j], out)) return false;
    return true;
  }

  bool slice(const Pattern& p, const Value& v, Bindings& out) {
    const auto& elems = v.elems;
    auto r = std::find_if(p.children.begin(), p.children.end(), is_rest);
    if (r == p.children.end()) {
      for (std::size_t k = 0; k < p.children.size(); ++k)
        if (!match(p.children[k], elems[k], out)) return false;
      return true;
    }
    auto at = static_cast<std::size_t>(r - p.children.begin());
    std::size_t suffix = p.children.size() - at - 1;
    for (std::size_t k = 0; k < at; ++k)
      if (!match(p.children[k], elems[k], out)) return false;
    const Pattern& rest = p.children[at];
    if (rest.kind == PatternKind::Identifier) {
      std::vector<Value> middle(elems.begin() + static_cast<std::ptrdiff_t>(at),
                                elems.end() - static_cast<std::ptrdiff_t>(suffix));
      out.emplace_back(rest.name, Value::array(std::move(middle)));
    }
    for (std::size_t j = 0; j < suffix; ++j)
      if (!match(p.children[at + 1 + j], elems[elems.size() - suffix + j], out)) return false;
    return true;
  }
};

}  // namespace

bool matches(const Pattern& p, const Value& v, const TypeEnv&) {
  Bindings b;
  return Matcher(nullptr).match(p, v, b);
}

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

RunOptions default_run_options() {
  RunOptions o;
  if (const char* fuel = std::getenv("MCDC_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(fuel, &end, 10);
    if (end != fuel && *end == '\0' && v > 0) o.fuel = v;
  }
  return o;
}

namespace {

struct ReturnSignal {
  Value value;
};

class Interpreter {
 public:
  Interpreter(const TypedProgram& program, const DecisionSet& ds, const RunOptions& options)
      : program_(program.program), env_(*program.env), fuel_(options.fuel), max_depth_(options.max_depth) {
    trace_.program_hash = program_.source_hash;
    auto size = static_cast<std::size_t>(std::max(program_.next_id, 0));
    expr_decision_.assign(size, -1);
    pattern_decision_.assign(size, -1);
    expr_condition_.assign(size, {-1, -1});
    pattern_condition_.assign(size, {-1, -1});
    for (auto [node, d] : ds.expr_decision) expr_decision_.at(static_cast<std::size_t>(node)) = d;
    for (auto [node, d] : ds.pattern_decision) pattern_decision_.at(static_cast<std::size_t>(node)) = d;
    for (auto [node, c] : ds.expr_condition) expr_condition_.at(static_cast<std::size_t>(node)) = c;
    for (auto [node, c] : ds.pattern_condition) pattern_condition_.at(static_cast<std::size_t>(node)) = c;
    for (const auto& d : ds.decisions) condition_counts_.push_back(d.conditions.size());
    active_.resize(ds.decisions.size());
    for (const auto& item : program_.items)
      if (const auto* f = std::get_if<FnDef>(&item)) functions_[f->name] = f;
    for (const auto& [name, info] : env_.statics) statics_[name] = info.initial;
    recorder_ = [this](const Pattern& p, bool v) { record(pattern_condition_, p.id, v); };
  }

  Value call(const std::string& name, std::vector<Value> args, const SourceSpan& span) {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw RuntimeError(span, "no function `" + name + "`");
    const FnDef& f = *it->second;
    if (depth_ >= max_depth_) throw RuntimeError(span, "stack overflow: more than " + std::to_string(max_depth_) + " nested calls");
    trace_.entries.insert(name);
    std::size_t saved_base = frame_base_;
    std::size_t saved_size = vars_.size();
    frame_base_ = vars_.size();
    ++depth_;
    for (std::size_t k = 0; k < f.params.size(); ++k) vars_.emplace_back(f.params[k].name, std::move(args[k]));
    Value result;
    auto restore = [&] {
      vars_.resize(saved_size);
      frame_base_ = saved_base;
      --depth_;
    };
    try {
      result = eval(f.body);
      trace_.exits.insert(f.body.id);
    } catch (ReturnSignal& r) {
      result = std::move(r.value);
    } catch (...) {
      restore();
      throw;
    }
    restore();
    return result;
  }

  Trace& trace() { return trace_; }
  std::string& output() { return output_; }

 private:
  const Program& program_;
  const TypeEnv& env_;
  std::uint64_t fuel_;
  int max_depth_;
  int depth_ = 0;
  Trace trace_;
  std::string output_;
  std::uint64_t seq_ = 0;

  std::map<std::string, const FnDef*> functions_;
  std::map<std::string, Value> statics_;
  Bindings vars_;
  std::size_t frame_base_ = 0;

  std::vector<int> expr_decision_;
  std::vector<int> pattern_decision_;
  std::vector<std::pair<int, int>> expr_condition_;
  std::vector<std::pair<int, int>> pattern_condition_;
  std::vector<std::size_t> condition_counts_;
  std::vector<std::vector<std::vector<TriState>>> active_;  // per decision: stack of open visits
  Recorder recorder_;

  // An open decision visit; dropped unless finished (e.g. on return or error).
  class Visit {
   public:
    Visit(Interpreter& in, int decision) : in_(in), decision_(decision) {
      if (decision_ >= 0)
        in_.active_[static_cast<std::size_t>(decision_)].emplace_back(
            in_.condition_counts_[static_cast<std::size_t>(decision_)]);
    }
    Visit(const Visit&) = delete;
    Visit& operator=(const Visit&) = delete;
    ~Visit() {
      if (decision_ >= 0) in_.active_[static_cast<std::size_t>(decision_)].pop_back();
    }
    void finish(bool outcome) {
      if (decision_ < 0) return;
      auto& stack = in_.active_[static_cast<std::size_t>(decision_)];
      EvaluationVector v;
      v.decision = decision_;
      v.conds = std::move(stack.back());
      stack.pop_back();
      v.outcome = outcome;
      v.seq = in_.seq_++;
      if (std::any_of(v.conds.begin(), v.conds.end(), [](const TriState& t) { return t.has_value(); }))
        in_.trace_.vectors.push_back(std::move(v));
      decision_ = -1;
    }

   private:
    Interpreter& in_;
    int decision_;
  };

  void record(const std::vector<std::pair<int, int>>& map, int node, bool value) {
    auto [d, index] = map[static_cast<std::size_t>(node)];
    if (d < 0) return;
    auto& stack = active_[static_cast<std::size_t>(d)];
    if (!stack.empty()) stack.back()[static_cast<std::size_t>(index)] = value;
  }

  void tick(const SourceSpan& span) {
    if (fuel_ == 0) throw RuntimeError(span, "out of fuel");
    --fuel_;
  }

  // ---- variables ----------------------------------------------------------

  Value* local(const std::string& name) {
    for (std::size_t k = vars_.size(); k > frame_base_; --k)
      if (vars_[k - 1].first == name) return &vars_[k - 1].second;
    return nullptr;
  }

  Value& place(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Path:
        if (e.target == ExprTarget::Local) {
          if (Value* v = local(e.path[0])) return *v;
        } else if (e.target == ExprTarget::Static) {
          return statics_.at(e.path[0]);
        }
        break;
      case ExprKind::Field: return place(e.kids[0]).elems.at(static_cast<std::size_t>(e.field_index[0]));
      case ExprKind::Index: {
        Value idx = eval(e.kids[1]);
        Value& base = place(e.kids[0]);
        return element(base, idx, e.span);
      }
      default: break;
    }
    throw RuntimeError(e.span, "invalid assignment target");
  }

  static Value& element(Value& base, const Value& idx, const SourceSpan& span) {
    if (idx.i < 0 || static_cast<std::size_t>(idx.i) >= base.elems.size())
      throw RuntimeError(span, "index out of bounds: the len is " + std::to_string(base.elems.size()) +
                                   " but the index is " + std::to_string(idx.i));
    return base.elems[static_cast<std::size_t>(idx.i)];
  }

  // ---- patterns -----------------------------------------------------------

  bool match_root(const Pattern& p, const Value& v, Bindings& out) {
    int d = pattern_decision_[static_cast<std::size_t>(p.id)];
    if (d < 0) return Matcher(nullptr).match(p, v, out);
    Visit visit(*this, d);
    bool ok = Matcher(&recorder_).match(p, v, out);
    visit.finish(ok);
    return ok;
  }

  void bind(Bindings& b) {
    for (auto& x : b) vars_.push_back(std::move(x));
  }

  // ---- expressions --------------------------------------------------------

  Value eval(const Expr& e) {
    tick(e.span);
    int d = expr_decision_[static_cast<std::size_t>(e.id)];
    Visit visit(*this, d);
    Value v = eval_inner(e);
    if (expr_condition_[static_cast<std::size_t>(e.id)].first >= 0) record(expr_condition_, e.id, v.b);
    visit.finish(v.b);
    return v;
  }

  Value check_int(const Expr& e, std::int64_t v, const char* what) {
    const TypePtr& t = strip_refs(e.type);
    if (v < t->int_min() || v > t->int_max()) throw RuntimeError(e.span, std::string("attempt to ") + what + " with overflow");
    return Value::integer(v);
  }

  Value arith(const Expr& e, BinaryOp op, const Value& a, const Value& b) {
    switch (op) {
      case BinaryOp::Add: return check_int(e, a.i + b.i, "add");
      case BinaryOp::Sub: return check_int(e, a.i - b.i, "subtract");
      case BinaryOp::Mul: return check_int(e, a.i * b.i, "multiply");
      case BinaryOp::Div:
      case BinaryOp::Rem:
        if (b.i == 0)
          throw RuntimeError(e.span, op == BinaryOp::Div ? "attempt to divide by zero"
                                                         : "attempt to calculate the remainder with a divisor of zero");
        return check_int(e, op == BinaryOp::Div ? a.i / b.i : a.i % b.i, op == BinaryOp::Div ? "divide" : "calculate the remainder");
      default: break;
    }
    throw RuntimeError(e.span, "unsupported arithmetic operator");
  }

  std::string variant_name(const Expr& e) const {
    const auto& info = env_.enum_info(*strip_refs(e.type));
    return info.variants.at(static_cast<std::size_t>(e.variant)).name;
  }

  std::vector<Value> eval_all(const std::vector<Expr>& kids) {
    std::vector<Value> out;
    out.reserve(kids.size());
    for (const auto& k : kids) out.push_back(eval(k));
    return out;
  }

  std::string format(const Expr& e) {
    std::string out;
    std::size_t next = 0;
    for (const auto& piece : parse_format(e.literal.s, e.span)) {
      switch (piece.kind) {
        case FormatPiece::Kind::Text: out += piece.text; break;
        case FormatPiece::Kind::Next: out += eval(e.kids[next++]).display(); break;
        case FormatPiece::Kind::Named: {
          if (Value* v = local(piece.text)) out += v->display();
          else if (auto c = env_.consts.find(piece.text); c != env_.consts.end()) out += c->second.value.display();
          else out += statics_.at(piece.text).display();
          break;
        }
      }
    }
    // Positional arguments are evaluated even when a placeholder is missing.
    while (next < e.kids.size()) eval(e.kids[next++]);
    return out;
  }

  Value eval_inner(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal:
        switch (e.literal.kind) {
          case Literal::Kind::Bool: return Value::boolean(e.literal.b);
          case Literal::Kind::Int: return Value::integer(e.literal.i);
          case Literal::Kind::Char: return Value::character(e.literal.c);
          case Literal::Kind::Str: return Value::string(e.literal.s);
        }
        break;
      case ExprKind::Path:
        switch (e.target) {
          case ExprTarget::Local:
            if (Value* v = local(e.path[0])) return *v;
            break;
          case ExprTarget::Const: return env_.consts.at(e.path[0]).value;
          case ExprTarget::Static: return statics_.at(e.path[0]);
          case ExprTarget::EnumVariant: return Value::enumeration(variant_name(e), e.variant, {});
          case ExprTarget::Struct: return Value::structure(e.path[0], {});
          default: break;
        }
        throw RuntimeError(e.span, "unresolved name `" + path_str(e.path) + "`");
      case ExprKind::Tuple: return e.kids.empty() ? Value::unit() : Value::tuple(eval_all(e.kids));
      case ExprKind::Array: return Value::array(eval_all(e.kids));
      case ExprKind::StructLit: {
        std::vector<Value> fields(e.kids.size());
        for (std::size_t k = 0; k < e.kids.size(); ++k)
          fields[static_cast<std::size_t>(e.field_index[k])] = eval(e.kids[k]);
        if (e.target == ExprTarget::EnumVariant) return Value::enumeration(variant_name(e), e.variant, std::move(fields));
        return Value::structure(e.path[0], std::move(fields));
      }
      case ExprKind::Call: {
        std::vector<Value> args = eval_all(e.kids);
        if (e.target == ExprTarget::EnumVariant) return Value::enumeration(variant_name(e), e.variant, std::move(args));
        if (e.target == ExprTarget::Struct) return Value::structure(e.path[0], std::move(args));
        return call(e.path[0], std::move(args), e.span);
      }
      case ExprKind::MethodCall: {
        Value recv = eval(e.kids[0]);
        return Value::integer(static_cast<std::int64_t>(recv.elems.size()));
      }
      case ExprKind::Field: {
        Value base = eval(e.kids[0]);
        return std::move(base.elems.at(static_cast<std::size_t>(e.field_index[0])));
      }
      case ExprKind::Index: {
        Value base = eval(e.kids[0]);
        Value idx = eval(e.kids[1]);
        return std::move(element(base, idx, e.span));
      }
      case ExprKind::Unary: {
        Value v = eval(e.kids[0]);
        if (e.unary_op == UnaryOp::Not) return Value::boolean(!v.b);
        return check_int(e, -v.i, "negate");
      }
      case ExprKind::Binary: {
        BinaryOp op = e.binary_op;
        Value a = eval(e.kids[0]);
        if (op == BinaryOp::And && !a.b) return Value::boolean(false);
        if (op == BinaryOp::Or && a.b) return Value::boolean(true);
        Value b = eval(e.kids[1]);
        switch (op) {
          case BinaryOp::And:
          case BinaryOp::Or: return Value::boolean(b.b);
          case BinaryOp::Eq: return Value::boolean(a == b);
          case BinaryOp::Ne: return Value::boolean(!(a == b));
          case BinaryOp::Lt: return Value::boolean(a < b);
          case BinaryOp::Le: return Value::boolean(!(b < a));
          case BinaryOp::Gt: return Value::boolean(b < a);
          case BinaryOp::Ge: return Value::boolean(!(a < b));
          default: return arith(e, op, a, b);
        }
      }
      case ExprKind::Assign: {
        Value rhs = eval(e.kids[1]);
        Value& target = place(e.kids[0]);
        if (e.compound) target = arith(e.kids[0], *e.compound, target, rhs);
        else target = std::move(rhs);
        return Value::unit();
      }
      case ExprKind::Ref:
      case ExprKind::Deref: return eval(e.kids[0]);
      case ExprKind::If: {
        if (eval(e.kids[0]).b) return eval(e.kids[1]);
        if (e.kids.size() == 3) return eval(e.kids[2]);
        return Value::unit();
      }
      case ExprKind::IfLet: {
        Value scrutinee = eval(e.kids[0]);
        Bindings b;
        if (match_root(e.pattern[0], scrutinee, b)) {
          std::size_t mark = vars_.size();
          bind(b);
          Value v = eval(e.kids[1]);
          vars_.resize(mark);
          return v;
        }
        if (e.kids.size() == 3) return eval(e.kids[2]);
        return Value::unit();
      }
      case ExprKind::Match: {
        Value scrutinee = eval(e.kids[0]);
        for (const auto& arm : e.arms) {
          Bindings b;
          if (!match_root(arm.pattern, scrutinee, b)) continue;
          std::size_t mark = vars_.size();
          bind(b);
          if (arm.guard && !eval(*arm.guard).b) {
            vars_.resize(mark);
            continue;
          }
          if (arm.body.kind != ExprKind::Block) trace_.statements.insert(arm.body.id);
          Value v = eval(arm.body);
          vars_.resize(mark);
          return v;
        }
        throw RuntimeError(e.span, "no match arm matched the scrutinee");
      }
      case ExprKind::Block: return block(e);
      case ExprKind::While:
        while (eval(e.kids[0]).b) {
          tick(e.span);
          eval(e.kids[1]);
        }
        return Value::unit();
      case ExprKind::Return:
        trace_.exits.insert(e.id);
        throw ReturnSignal{e.kids.empty() ? Value::unit() : eval(e.kids[0])};
      case ExprKind::QuestionMark: throw RuntimeError(e.span, "`?` must be desugared before evaluation");
      case ExprKind::Print: {
        output_ += format(e);
        if (e.name == "println") output_ += '\n';
        return Value::unit();
      }
      case ExprKind::Panic: {
        std::string msg = e.literal.s.empty() && e.kids.empty() ? "explicit panic" : format(e);
        throw RuntimeError(e.span, "panicked: " + msg);
      }
    }
    throw RuntimeError(e.span, "unsupported expression");
  }

  Value block(const Expr& e) {
    std::size_t mark = vars_.size();
    for (const auto& s : e.stmts) {
      trace_.statements.insert(s.id);
      if (s.kind == Stmt::Kind::Expr) {
        eval(s.expr);
        continue;
      }
      Value init = eval(*s.init);
      Bindings b;
      if (!match_root(s.pattern, init, b)) {
        eval(*s.else_block);
        throw RuntimeError(s.span, "`let ... else` block did not diverge");
      }
      bind(b);
    }
    Value out;
    if (e.has_tail) {
      trace_.statements.insert(e.kids[0].id);
      out = eval(e.kids[0]);
    }
    vars_.resize(mark);
    return out;
  }
};

TestResult judge(const TestCase& test, const EvalResult& r, const TypeEnv& env) {
  TestResult out;
  out.name = test.name;
  out.output = r.output;
  const TypePtr& result_type = env.functions.at(test.entry).result;
  if (r.value) out.value = env.format_value(*r.value, result_type);
  if (r.error) {
    out.failure = r.error->render();
  } else if (test.expect && !(*r.value == *test.expect)) {
    out.failure = "expected " + env.format_value(*test.expect, result_type) + ", got " + out.value;
  } else if (test.expect_output && r.output != *test.expect_output) {
    nlohmann::json want = *test.expect_output, got = r.output;
    out.failure = "expected output " + want.dump() + ", got " + got.dump();
  }
  out.passed = out.failure.empty();
  return out;
}

}  // namespace

EvalResult evaluate(const TypedProgram& program, const DecisionSet& ds, const std::string& entry,
                    const std::vector<Value>& args, const RunOptions& options) {
  EvalResult result;
  Interpreter in(program, ds, options);
  SourceSpan where;
  where.file = program.program.file;
  try {
    auto fn = program.env->functions.find(entry);
    if (fn == program.env->functions.end()) throw RuntimeError(where, "no function `" + entry + "`");
    if (fn->second.params.size() != args.size())
      throw RuntimeError(where, "`" + entry + "` takes " + std::to_string(fn->second.params.size()) + " arguments");
    result.value = in.call(entry, args, where);
  } catch (const RuntimeError& e) {
    result.error = e;
  }
  result.output = std::move(in.output());
  result.trace = std::move(in.trace());
  return result;
}

EvalResult evaluate(const TypedProgram& program, const DecisionSet& ds, const TestCase& test, const RunOptions& options) {
  return evaluate(program, ds, test.entry, test.args, options);
}

std::size_t SuiteResult::failures() const {
  return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const TestResult& r) { return !r.passed; }));
}

namespace {

SuiteResult collect(const TypedProgram& program, const std::vector<TestCase>& suite, std::vector<EvalResult>& runs) {
  SuiteResult out;
  out.trace.program_hash = program.program.source_hash;
  for (std::size_t k = 0; k < suite.size(); ++k) {
    out.results.push_back(judge(suite[k], runs[k], *program.env));
    out.trace.vectors.insert(out.trace.vectors.end(), runs[k].trace.vectors.begin(), runs[k].trace.vectors.end());
    out.trace.statements.insert(runs[k].trace.statements.begin(), runs[k].trace.statements.end());
    out.trace.entries.insert(runs[k].trace.entries.begin(), runs[k].trace.entries.end());
    out.trace.exits.insert(runs[k].trace.exits.begin(), runs[k].trace.exits.end());
  }
  out.trace.canonicalize();
  return out;
}

}  // namespace

SuiteResult run_suite(const TypedProgram& program, const DecisionSet& ds, const std::vector<TestCase>& suite,
                      const RunOptions& options) {
  std::vector<EvalResult> runs(suite.size());
  const auto n = static_cast<std::ptrdiff_t>(suite.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    auto i = static_cast<std::size_t>(k);
    runs[i] = evaluate(program, ds, suite[i], options);
  }
  return collect(program, suite, runs);
}

SuiteResult run_suite_serial(const TypedProgram& program, const DecisionSet& ds, const std::vector<TestCase>& suite,
                             const RunOptions& options) {
  std::vector<EvalResult> runs(suite.size());
  for (std::size_t k = 0; k < suite.size(); ++k) runs[k] = evaluate(program, ds, suite[k], options);
  return collect(program, suite, runs);
}

}  // namespace mcdc
