#include "mcdc/printer.hpp"

#include <sstream>

namespace mcdc {
namespace {

std::string indent_str(int level) { return std::string(static_cast<std::size_t>(level) * 4, ' '); }

// Precedence levels; higher binds tighter.
enum Prec : int {
  kAssign = 1,
  kOr = 2,
  kAnd = 3,
  kCompare = 4,
  kAdd = 5,
  kMul = 6,
  kUnary = 7,
  kPostfix = 8,
  kPrimary = 9,
};

int binary_prec(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return kOr;
    case BinaryOp::And: return kAnd;
    case BinaryOp::Add:
    case BinaryOp::Sub: return kAdd;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Rem: return kMul;
    default: return kCompare;
  }
}

bool block_like(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Block:
    case ExprKind::If:
    case ExprKind::IfLet:
    case ExprKind::Match:
    case ExprKind::While: return true;
    default: return false;
  }
}

class Printer {
 public:
  std::string program(const Program& p) {
    std::string out;
    for (std::size_t k = 0; k < p.items.size(); ++k) {
      if (k) out += "\n";
      out += item(p.items[k]);
    }
    return out;
  }

  std::string item(const Item& it) {
    return std::visit([this](const auto& def) { return this->def(def); }, it);
  }

  std::string type(const TypeExpr& t) {
    switch (t.kind) {
      case TypeExpr::Kind::Named: {
        std::string out = t.name;
        if (!t.args.empty()) {
          out += "<";
          for (std::size_t k = 0; k < t.args.size(); ++k) out += (k ? ", " : "") + type(t.args[k]);
          out += ">";
        }
        return out;
      }
      case TypeExpr::Kind::Tuple: {
        std::string out = "(";
        for (std::size_t k = 0; k < t.args.size(); ++k) out += (k ? ", " : "") + type(t.args[k]);
        if (t.args.size() == 1) out += ",";
        return out + ")";
      }
      case TypeExpr::Kind::Array: return "[" + type(t.args[0]) + "; " + std::to_string(t.length) + "]";
      case TypeExpr::Kind::Slice: return "[" + type(t.args[0]) + "]";
      case TypeExpr::Kind::Ref: return std::string(t.is_mut ? "&mut " : "&") + type(t.args[0]);
    }
    return "?";
  }

  std::string pattern(const Pattern& p) {
    auto list = [this](const std::vector<Pattern>& kids) {
      std::string out;
      for (std::size_t k = 0; k < kids.size(); ++k) out += (k ? ", " : "") + pattern(kids[k]);
      return out;
    };
    switch (p.kind) {
      case PatternKind::Literal: return p.literal.str();
      case PatternKind::Identifier: {
        std::string out;
        if (p.by_ref) out += "ref ";
        if (p.is_mut) out += "mut ";
        out += p.name;
        if (!p.children.empty()) out += " @ " + pattern(p.children[0]);
        return out;
      }
      case PatternKind::Wildcard: return "_";
      case PatternKind::Rest: return "..";
      case PatternKind::Range: {
        std::string out = p.lo ? p.lo->str() : "";
        out += p.inclusive ? "..=" : "..";
        if (p.hi) out += p.hi->str();
        return out;
      }
      case PatternKind::Reference: return std::string(p.is_mut ? "&mut " : "&") + pattern(p.children[0]);
      case PatternKind::Struct: {
        std::string out = path_str(p.path) + " {";
        for (std::size_t k = 0; k < p.children.size(); ++k) {
          out += k ? ", " : " ";
          const Pattern& c = p.children[k];
          bool shorthand = c.kind == PatternKind::Identifier && !c.ambiguous && c.children.empty() &&
                           c.name == p.fields[k];
          out += shorthand ? pattern(c) : p.fields[k] + ": " + pattern(c);
        }
        if (p.has_rest) out += p.children.empty() ? " .." : ", ..";
        return out + " }";
      }
      case PatternKind::TupleStruct: return path_str(p.path) + "(" + list(p.children) + ")";
      case PatternKind::Tuple:
        return p.children.size() == 1 ? "(" + pattern(p.children[0]) + ",)" : "(" + list(p.children) + ")";
      case PatternKind::Grouped: return "(" + pattern(p.children[0]) + ")";
      case PatternKind::Slice: return "[" + list(p.children) + "]";
      case PatternKind::Path: return path_str(p.path);
      case PatternKind::Or: {
        std::string out;
        for (std::size_t k = 0; k < p.children.size(); ++k) out += (k ? " | " : "") + pattern(p.children[k]);
        return out;
      }
    }
    return "?";
  }

  std::string expr(const Expr& e, int min_prec = 0, bool no_struct = false, int level = 0) {
    int prec = precedence(e);
    bool wrap = prec < min_prec || (no_struct && e.kind == ExprKind::StructLit);
    std::string body = expr_inner(e, wrap ? false : no_struct, level);
    return wrap ? "(" + body + ")" : body;
  }

 private:
  static int precedence(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Assign:
      case ExprKind::Return: return kAssign;
      case ExprKind::Binary: return binary_prec(e.binary_op);
      case ExprKind::Unary:
      case ExprKind::Ref:
      case ExprKind::Deref: return kUnary;
      case ExprKind::QuestionMark:
      case ExprKind::Field:
      case ExprKind::Index:
      case ExprKind::MethodCall: return kPostfix;
      default: return kPrimary;
    }
  }

  // Operand of a binary or postfix operator: block-like expressions are
  // parenthesized so they cannot be taken for statements.
  std::string operand(const Expr& e, int min_prec, bool ns, int level) {
    if (block_like(e)) return "(" + expr(e, 0, false, level) + ")";
    return expr(e, min_prec, ns, level);
  }

  std::string args(const std::vector<Expr>& kids, std::size_t from, int level) {
    std::string out;
    for (std::size_t k = from; k < kids.size(); ++k) out += (k > from ? ", " : "") + expr(kids[k], 0, false, level);
    return out;
  }

  std::string expr_inner(const Expr& e, bool ns, int level) {
    switch (e.kind) {
      case ExprKind::Literal: return e.literal.str();
      case ExprKind::Path: return path_str(e.path);
      case ExprKind::Tuple:
        return e.kids.size() == 1 ? "(" + expr(e.kids[0], 0, false, level) + ",)" : "(" + args(e.kids, 0, level) + ")";
      case ExprKind::Array: return "[" + args(e.kids, 0, level) + "]";
      case ExprKind::StructLit: {
        std::string out = path_str(e.path) + " {";
        for (std::size_t k = 0; k < e.kids.size(); ++k)
          out += (k ? ", " : " ") + e.fields[k] + ": " + expr(e.kids[k], 0, false, level);
        return out + " }";
      }
      case ExprKind::Call: return path_str(e.path) + "(" + args(e.kids, 0, level) + ")";
      case ExprKind::MethodCall:
        return operand(e.kids[0], kPostfix, ns, level) + "." + e.name + "(" + args(e.kids, 1, level) + ")";
      case ExprKind::Field: return operand(e.kids[0], kPostfix, ns, level) + "." + e.name;
      case ExprKind::Index:
        return operand(e.kids[0], kPostfix, ns, level) + "[" + expr(e.kids[1], 0, false, level) + "]";
      case ExprKind::QuestionMark: return operand(e.kids[0], kPostfix, ns, level) + "?";
      case ExprKind::Unary:
        return std::string(e.unary_op == UnaryOp::Neg ? "-" : "!") + operand(e.kids[0], kUnary, ns, level);
      case ExprKind::Ref: return std::string(e.is_mut ? "&mut " : "&") + operand(e.kids[0], kUnary, ns, level);
      case ExprKind::Deref: return "*" + operand(e.kids[0], kUnary, ns, level);
      case ExprKind::Binary: {
        int p = binary_prec(e.binary_op);
        int rhs_prec = p + 1;
        int lhs_prec = p == kCompare ? p + 1 : p;
        return operand(e.kids[0], lhs_prec, ns, level) + " " + to_string(e.binary_op) + " " +
               operand(e.kids[1], rhs_prec, ns, level);
      }
      case ExprKind::Assign: {
        std::string op = e.compound ? std::string(to_string(*e.compound)) + "=" : "=";
        return operand(e.kids[0], kOr, ns, level) + " " + op + " " + expr(e.kids[1], kAssign, ns, level);
      }
      case ExprKind::Return:
        return e.kids.empty() ? "return" : "return " + expr(e.kids[0], kAssign, ns, level);
      case ExprKind::Print:
      case ExprKind::Panic: {
        std::string out = e.name + "!(";
        if (e.literal.kind == Literal::Kind::Str) out += "\"" + escape_string(e.literal.s) + "\"";
        for (const auto& k : e.kids) out += ", " + expr(k, 0, false, level);
        return out + ")";
      }
      case ExprKind::Block: return block(e, level);
      case ExprKind::If:
      case ExprKind::IfLet: {
        std::string out = "if ";
        if (e.kind == ExprKind::IfLet) out += "let " + pattern(e.pattern[0]) + " = ";
        out += expr(e.kids[0], 0, true, level) + " " + block(e.kids[1], level);
        if (e.kids.size() > 2) out += " else " + expr(e.kids[2], 0, false, level);
        return out;
      }
      case ExprKind::While: return "while " + expr(e.kids[0], 0, true, level) + " " + block(e.kids[1], level);
      case ExprKind::Match: {
        std::string out = "match " + expr(e.kids[0], 0, true, level) + " {\n";
        for (const auto& arm : e.arms) {
          out += indent_str(level + 1) + pattern(arm.pattern);
          if (arm.guard) out += " if " + expr(*arm.guard, 0, false, level + 1);
          out += " => " + expr(arm.body, 0, false, level + 1) + ",\n";
        }
        return out + indent_str(level) + "}";
      }
    }
    return "?";
  }

  std::string block(const Expr& b, int level) {
    if (b.stmts.empty() && !b.has_tail) return "{}";
    std::string out = "{\n";
    for (const auto& s : b.stmts) out += indent_str(level + 1) + stmt(s, level + 1) + "\n";
    if (b.has_tail) {
      const Expr& tail = b.kids[0];
      // A block-like tail followed by nothing is fine; anything else that
      // starts like a statement but continues needs parentheses.
      out += indent_str(level + 1) + expr(tail, 0, false, level + 1) + "\n";
    }
    return out + indent_str(level) + "}";
  }

  std::string stmt(const Stmt& s, int level) {
    if (s.kind == Stmt::Kind::Let) {
      std::string out = "let " + pattern(s.pattern);
      if (s.type_annotation) out += ": " + type(*s.type_annotation);
      if (s.init) out += " = " + expr(*s.init, 0, false, level);
      if (s.else_block) out += " else " + block(*s.else_block, level);
      return out + ";";
    }
    std::string body = block_like(s.expr) ? expr(s.expr, 0, false, level) : expr(s.expr, 0, false, level);
    // Non-block-like statements starting with a block-like operand would be
    // mis-split on re-parse; operand() already parenthesizes those.
    return body + (s.has_semi ? ";" : "");
  }

  std::string def(const EnumDef& d) {
    std::string out = "enum " + d.name + " {\n";
    for (const auto& v : d.variants) out += indent_str(1) + v.name + fields(v.shape, v.field_names, v.field_types) + ",\n";
    return out + "}\n";
  }

  std::string fields(FieldShape shape, const std::vector<std::string>& names, const std::vector<TypeExpr>& types) {
    if (shape == FieldShape::Unit) return "";
    std::string out = shape == FieldShape::Tuple ? "(" : " { ";
    for (std::size_t k = 0; k < types.size(); ++k) {
      if (k) out += ", ";
      if (shape == FieldShape::Named) out += names[k] + ": ";
      out += type(types[k]);
    }
    return out + (shape == FieldShape::Tuple ? ")" : " }");
  }

  std::string def(const StructDef& d) {
    std::string out = "struct " + d.name + fields(d.shape, d.field_names, d.field_types);
    return out + (d.shape == FieldShape::Named ? "\n" : ";\n");
  }

  std::string def(const ConstDef& d) {
    return "const " + d.name + ": " + type(d.type) + " = " + expr(d.value) + ";\n";
  }

  std::string def(const StaticDef& d) {
    return std::string("static ") + (d.is_mut ? "mut " : "") + d.name + ": " + type(d.type) + " = " + expr(d.value) +
           ";\n";
  }

  std::string def(const FnDef& d) {
    std::string out = "fn " + d.name + "(";
    for (std::size_t k = 0; k < d.params.size(); ++k) {
      if (k) out += ", ";
      out += (d.params[k].is_mut ? "mut " : "") + d.params[k].name + ": " + type(d.params[k].type);
    }
    out += ")";
    if (d.return_type) out += " -> " + type(*d.return_type);
    return out + " " + block(d.body, 0) + "\n";
  }
};

// ---- structural dump ------------------------------------------------------

class Dumper {
 public:
  std::ostringstream out;

  void type(const TypeExpr& t) {
    out << "(ty " << static_cast<int>(t.kind) << " " << t.name << " " << t.length << " " << t.is_mut;
    for (const auto& a : t.args) {
      out << " ";
      type(a);
    }
    out << ")";
  }

  void pattern(const Pattern& p) {
    out << "(" << to_string(p.kind);
    switch (p.kind) {
      case PatternKind::Literal: out << " " << p.literal.str(); break;
      case PatternKind::Identifier:
        out << " " << p.name << (p.by_ref ? " ref" : "") << (p.is_mut ? " mut" : "") << (p.ambiguous ? " ?" : "");
        break;
      case PatternKind::Range:
        out << " " << (p.lo ? p.lo->str() : "-") << (p.inclusive ? " ..= " : " .. ") << (p.hi ? p.hi->str() : "-");
        break;
      case PatternKind::Reference: out << (p.is_mut ? " mut" : ""); break;
      case PatternKind::Struct:
        out << " " << path_str(p.path) << (p.has_rest ? " rest" : "");
        for (const auto& f : p.fields) out << " ." << f;
        break;
      case PatternKind::TupleStruct:
      case PatternKind::Path: out << " " << path_str(p.path); break;
      default: break;
    }
    for (const auto& c : p.children) {
      out << " ";
      pattern(c);
    }
    out << ")";
  }

  void expr(const Expr& e) {
    out << "(e" << static_cast<int>(e.kind);
    switch (e.kind) {
      case ExprKind::Literal: out << " " << e.literal.str(); break;
      case ExprKind::Path:
      case ExprKind::Call: out << " " << path_str(e.path); break;
      case ExprKind::StructLit:
        out << " " << path_str(e.path);
        for (const auto& f : e.fields) out << " ." << f;
        break;
      case ExprKind::Field:
      case ExprKind::MethodCall: out << " " << e.name; break;
      case ExprKind::Unary: out << " " << static_cast<int>(e.unary_op); break;
      case ExprKind::Binary: out << " " << to_string(e.binary_op); break;
      case ExprKind::Assign: out << " " << (e.compound ? to_string(*e.compound) : "="); break;
      case ExprKind::Ref: out << (e.is_mut ? " mut" : ""); break;
      case ExprKind::Print:
      case ExprKind::Panic: out << " " << e.name << " \"" << escape_string(e.literal.s) << "\""; break;
      case ExprKind::Block: out << (e.has_tail ? " tail" : ""); break;
      default: break;
    }
    for (const auto& p : e.pattern) {
      out << " ";
      pattern(p);
    }
    for (const auto& s : e.stmts) {
      out << " ";
      stmt(s);
    }
    for (const auto& arm : e.arms) {
      out << " (arm ";
      pattern(arm.pattern);
      if (arm.guard) {
        out << " if ";
        expr(*arm.guard);
      }
      out << " ";
      expr(arm.body);
      out << ")";
    }
    for (const auto& k : e.kids) {
      out << " ";
      expr(k);
    }
    out << ")";
  }

  void stmt(const Stmt& s) {
    if (s.kind == Stmt::Kind::Let) {
      out << "(let ";
      pattern(s.pattern);
      if (s.type_annotation) {
        out << " : ";
        type(*s.type_annotation);
      }
      if (s.init) {
        out << " = ";
        expr(*s.init);
      }
      if (s.else_block) {
        out << " else ";
        expr(*s.else_block);
      }
      out << ")";
    } else {
      out << "(stmt" << (s.has_semi ? "; " : " ");
      expr(s.expr);
      out << ")";
    }
  }

  void fields(const std::vector<std::string>& names, const std::vector<TypeExpr>& types) {
    for (std::size_t k = 0; k < types.size(); ++k) {
      out << " ";
      if (k < names.size()) out << names[k] << ":";
      type(types[k]);
    }
  }

  void item(const Item& it) {
    if (const auto* e = std::get_if<EnumDef>(&it)) {
      out << "(enum " << e->name;
      for (const auto& v : e->variants) {
        out << " (" << v.name << " " << static_cast<int>(v.shape);
        fields(v.field_names, v.field_types);
        out << ")";
      }
      out << ")";
    } else if (const auto* s = std::get_if<StructDef>(&it)) {
      out << "(struct " << s->name << " " << static_cast<int>(s->shape);
      fields(s->field_names, s->field_types);
      out << ")";
    } else if (const auto* c = std::get_if<ConstDef>(&it)) {
      out << "(const " << c->name << " ";
      type(c->type);
      out << " ";
      expr(c->value);
      out << ")";
    } else if (const auto* st = std::get_if<StaticDef>(&it)) {
      out << "(static " << (st->is_mut ? "mut " : "") << st->name << " ";
      type(st->type);
      out << " ";
      expr(st->value);
      out << ")";
    } else if (const auto* f = std::get_if<FnDef>(&it)) {
      out << "(fn " << f->name;
      for (const auto& p : f->params) {
        out << " (param " << (p.is_mut ? "mut " : "") << p.name << " ";
        type(p.type);
        out << ")";
      }
      if (f->return_type) {
        out << " -> ";
        type(*f->return_type);
      }
      out << " ";
      expr(f->body);
      out << ")";
    }
  }
};

}  // namespace

std::string print_program(const Program& program) { return Printer().program(program); }
std::string print_item(const Item& item) { return Printer().item(item); }
std::string print_pattern(const Pattern& pattern) { return Printer().pattern(pattern); }
std::string print_expr(const Expr& expr) { return Printer().expr(expr); }
std::string print_type(const TypeExpr& type) { return Printer().type(type); }

std::string dump(const Program& program) {
  Dumper d;
  for (const auto& it : program.items) {
    d.item(it);
    d.out << "\n";
  }
  return d.out.str();
}

std::string dump(const Pattern& pattern) {
  Dumper d;
  d.pattern(pattern);
  return d.out.str();
}

std::string dump(const Expr& expr) {
  Dumper d;
  d.expr(expr);
  return d.out.str();
}

}  // namespace mcdc
