#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mcdc/source_span.hpp"
#include "mcdc/value.hpp"

namespace mcdc {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Literal {
  enum class Kind { Bool, Int, Char, Str };
  Kind kind = Kind::Int;
  bool b = false;
  std::int64_t i = 0;
  char32_t c = 0;
  std::string s;

  std::string str() const;
  friend bool operator==(const Literal&, const Literal&) = default;
};

using Path = std::vector<std::string>;
std::string path_str(const Path& p);

/// Surface syntax of a type annotation, resolved to a Type by the checker.
struct TypeExpr {
  enum class Kind { Named, Tuple, Array, Slice, Ref };
  Kind kind = Kind::Named;
  std::string name;            // Named
  std::vector<TypeExpr> args;  // generic args, tuple elements, element / referent
  std::int64_t length = 0;     // Array
  bool is_mut = false;         // Ref
  SourceSpan span;
};

// ---------------------------------------------------------------------------
// Patterns
// ---------------------------------------------------------------------------

enum class PatternKind {
  Literal,
  Identifier,
  Wildcard,
  Rest,
  Range,
  Reference,
  Struct,
  TupleStruct,
  Tuple,
  Grouped,
  Slice,
  Path,
  Or,
};

const char* to_string(PatternKind k);

enum class Refutability { DirectlyRefutable, IndirectlyRefutable, Irrefutable };

const char* to_string(Refutability r);

/// What a name inside a pattern turned out to be after name resolution.
enum class PatternMeaning {
  Unresolved,
  Binding,
  Const,
  UnitStruct,
  EnumVariant,
  Struct,
};

/// One sub-pattern. A pattern is a tree of these; children are owned by value.
struct Pattern {
  PatternKind kind = PatternKind::Wildcard;
  SourceSpan span;
  int id = -1;
  std::vector<Pattern> children;

  Literal literal;                   // Literal
  std::string name;                  // Identifier
  bool by_ref = false;               // Identifier `ref`
  bool is_mut = false;               // Identifier `mut`, Reference `&mut`
  bool ambiguous = false;            // bare identifier: binding or path, decided by the checker
  Path path;                         // Struct, TupleStruct, Path
  std::vector<std::string> fields;   // Struct: field name per child
  bool has_rest = false;             // Struct `..`
  std::optional<Literal> lo;         // Range
  std::optional<Literal> hi;
  bool inclusive = true;

  // Filled in by the checker.
  TypePtr type;
  PatternMeaning meaning = PatternMeaning::Unresolved;
  int variant = -1;                  // enum variant index for Struct/TupleStruct/Path
  std::shared_ptr<const Value> const_value;
  std::vector<int> field_index;      // Struct: declaration index per child

  // Filled in by classify().
  std::optional<Refutability> refutability;

  bool has_binding_subpattern() const { return kind == PatternKind::Identifier && !children.empty(); }
};

// ---------------------------------------------------------------------------
// Expressions and statements
// ---------------------------------------------------------------------------

enum class ExprKind {
  Literal,
  Path,
  Tuple,
  Array,
  StructLit,
  Call,
  MethodCall,
  Field,
  Index,
  Unary,
  Binary,
  Assign,
  Ref,
  Deref,
  If,
  IfLet,
  Match,
  Block,
  While,
  Return,
  QuestionMark,
  Print,
  Panic,
};

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Rem, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

const char* to_string(BinaryOp op);
bool is_logical(BinaryOp op);
bool is_comparison(BinaryOp op);

/// What a path or call expression refers to, filled in by the checker.
enum class ExprTarget {
  Unresolved,
  Local,
  Const,
  Static,
  Function,
  EnumVariant,
  Struct,
};

struct Stmt;
struct MatchArm;

struct Expr {
  ExprKind kind = ExprKind::Literal;
  SourceSpan span;
  int id = -1;

  // Operands. Layout per kind:
  //   Unary/Ref/Deref/Return/QuestionMark/Field/MethodCall: kids[0] is the operand
  //   Binary/Assign/Index: kids[0], kids[1]
  //   If: cond, then, [else]; IfLet: scrutinee, then, [else]; While: cond, body
  //   Match: scrutinee; Block: [tail]; Call/Tuple/Array/StructLit/Print: elements
  std::vector<Expr> kids;
  std::vector<Stmt> stmts;          // Block
  std::vector<MatchArm> arms;       // Match
  std::vector<Pattern> pattern;     // IfLet (exactly one)

  Literal literal;                  // Literal; format string for Print/Panic
  Path path;                        // Path, Call, StructLit
  std::string name;                 // Field, MethodCall, Print macro name
  std::vector<std::string> fields;  // StructLit
  UnaryOp unary_op = UnaryOp::Neg;
  BinaryOp binary_op = BinaryOp::Add;
  std::optional<BinaryOp> compound; // Assign `+=` etc.
  bool is_mut = false;              // Ref
  bool has_tail = false;            // Block
  bool from_question_mark = false;  // Match produced by `?` desugaring

  // Filled in by the checker.
  TypePtr type;
  ExprTarget target = ExprTarget::Unresolved;
  int variant = -1;
  std::vector<int> field_index;     // StructLit: declaration index per field; Field: [index]
};

struct MatchArm {
  SourceSpan span;
  int id = -1;
  Pattern pattern;
  std::optional<Expr> guard;
  Expr body;
};

struct Stmt {
  enum class Kind { Let, Expr };
  Kind kind = Kind::Expr;
  SourceSpan span;
  int id = -1;
  // Let
  Pattern pattern;
  std::optional<TypeExpr> type_annotation;
  std::optional<Expr> init;
  std::optional<Expr> else_block;
  // Expr
  Expr expr;
  bool has_semi = false;
};

// ---------------------------------------------------------------------------
// Items
// ---------------------------------------------------------------------------

enum class FieldShape { Unit, Tuple, Named };

struct VariantDef {
  std::string name;
  FieldShape shape = FieldShape::Unit;
  std::vector<std::string> field_names;  // Named only
  std::vector<TypeExpr> field_types;
  SourceSpan span;
};

struct EnumDef {
  std::string name;
  std::vector<VariantDef> variants;
  SourceSpan span;
};

struct StructDef {
  std::string name;
  FieldShape shape = FieldShape::Unit;
  std::vector<std::string> field_names;
  std::vector<TypeExpr> field_types;
  SourceSpan span;
};

struct ConstDef {
  std::string name;
  TypeExpr type;
  Expr value;
  SourceSpan span;
};

struct StaticDef {
  std::string name;
  TypeExpr type;
  Expr value;
  bool is_mut = false;  // interior-mutable / `static mut`
  SourceSpan span;
};

struct Param {
  std::string name;
  bool is_mut = false;
  TypeExpr type;
  SourceSpan span;
};

struct FnDef {
  std::string name;
  std::vector<Param> params;
  std::optional<TypeExpr> return_type;
  Expr body;  // Block
  SourceSpan span;
};

using Item = std::variant<EnumDef, StructDef, ConstDef, StaticDef, FnDef>;

const std::string& item_name(const Item& item);
const SourceSpan& item_span(const Item& item);

struct Program {
  std::string file;
  std::vector<Item> items;
  int next_id = 0;  // next free node id; desugaring passes allocate from here
  std::uint64_t source_hash = 0;  // FNV-1a of the source text; traces carry it
};

std::uint64_t fnv1a64(std::string_view text);

}  // namespace mcdc
