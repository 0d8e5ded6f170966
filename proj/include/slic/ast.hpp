#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace slic {

// Levels of the base system, ordered data <= model <= genquant.
enum class Level : int { Data = 0, Model = 1, Genquant = 2 };

// Levels of the conditional-independence system: l1 below l2 and l3,
// l2 and l3 incomparable.
enum class CILevel : int { L1 = 0, L2 = 1, L3 = 2 };

[[nodiscard]] Level lub(const std::vector<Level>& levels);
[[nodiscard]] Level lub(Level a, Level b);
[[nodiscard]] bool leq(Level a, Level b);
[[nodiscard]] std::optional<CILevel> lub_ci(CILevel a, CILevel b);
[[nodiscard]] bool leq_ci(CILevel a, CILevel b);

[[nodiscard]] const char* to_string(Level l);
[[nodiscard]] const char* to_string(CILevel l);

struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct BaseType;
using BaseTypeP = std::shared_ptr<const BaseType>;

struct BaseType {
  enum class Kind { Real, Int, Array };
  Kind kind = Kind::Real;
  int bound = 0;      // Int: support bound n of int<n>, 0 when unbounded
  BaseTypeP elem;     // Array element type
  int size = 0;       // Array: static size, 0 when unknown

  static BaseType real();
  static BaseType integer(int bound = 0);
  static BaseType array(const BaseType& elem, int size = 0);

  [[nodiscard]] bool is_real() const { return kind == Kind::Real; }
  [[nodiscard]] bool is_int() const { return kind == Kind::Int; }
  [[nodiscard]] bool is_array() const { return kind == Kind::Array; }
  // Real scalar or array whose leaves are real.
  [[nodiscard]] bool is_continuous() const;
  [[nodiscard]] bool is_bounded_int() const { return is_int() && bound > 0; }
  [[nodiscard]] std::string str() const;
};

bool operator==(const BaseType& a, const BaseType& b);

struct Expr;
struct Stmt;
using ExprP = std::shared_ptr<const Expr>;
using StmtP = std::shared_ptr<const Stmt>;

struct Binder {
  std::string name;
  int K = 0;
};

struct Expr {
  enum class Kind { Var, Real, Int, Array, Index, Call, Comp, Target, Phi };
  Kind kind = Kind::Int;
  std::string name;          // Var name, Call function, Comp binder
  double real = 0.0;
  std::int64_t ival = 0;
  std::vector<ExprP> args;   // Array elems; Index {base, idx}; Call args; Comp {body, lo, hi}
  StmtP body;                // Target and Phi
  std::vector<Binder> binders;  // Phi
  SourceLoc loc;
};

struct LValue {
  std::string name;
  std::vector<ExprP> indices;
  SourceLoc loc;
};

struct Stmt {
  enum class Kind { Assign, Seq, For, If, Skip, Factor, Sample, Elim, Gen };
  Kind kind = Kind::Skip;
  LValue lhs;                 // Assign, Sample
  std::string name;           // For binder, Sample distribution, Elim/Gen variable
  int K = 0;                  // Elim/Gen support bound
  ExprP expr;                 // Assign rhs, If guard, Factor argument
  ExprP lo, hi;               // For bounds
  std::vector<ExprP> args;    // Sample arguments
  StmtP s1, s2;               // Seq parts, If branches, For/Elim/Gen body (s1)
  SourceLoc loc;
};

// Expression builders.
ExprP var(const std::string& name, SourceLoc loc = {});
ExprP real_c(double v, SourceLoc loc = {});
ExprP int_c(std::int64_t v, SourceLoc loc = {});
ExprP array_lit(std::vector<ExprP> elems, SourceLoc loc = {});
ExprP index(ExprP base, ExprP idx, SourceLoc loc = {});
ExprP call(const std::string& fn, std::vector<ExprP> args, SourceLoc loc = {});
ExprP comp(ExprP body, const std::string& binder, ExprP lo, ExprP hi, SourceLoc loc = {});
ExprP target(StmtP body, SourceLoc loc = {});
ExprP phi(std::vector<Binder> binders, StmtP body, SourceLoc loc = {});

// Statement builders.
StmtP skip();
StmtP assign(LValue lhs, ExprP rhs, SourceLoc loc = {});
StmtP assign(const std::string& x, ExprP rhs, SourceLoc loc = {});
StmtP seq(StmtP a, StmtP b);
StmtP seq(const std::vector<StmtP>& stmts);
StmtP for_loop(const std::string& x, ExprP lo, ExprP hi, StmtP body, SourceLoc loc = {});
StmtP if_else(ExprP guard, StmtP then_s, StmtP else_s, SourceLoc loc = {});
StmtP factor(ExprP e, SourceLoc loc = {});
StmtP sample(LValue lhs, const std::string& dist, std::vector<ExprP> args, SourceLoc loc = {});
StmtP sample(const std::string& x, const std::string& dist, std::vector<ExprP> args, SourceLoc loc = {});
StmtP elim(const std::string& z, int K, StmtP body, SourceLoc loc = {});
StmtP gen(const std::string& z, int K, StmtP body, SourceLoc loc = {});

// Flattened top-level sequence with skips removed.
[[nodiscard]] std::vector<StmtP> flatten(const StmtP& s);
// Right-nested Seq with skip units dropped (recursively).
[[nodiscard]] StmtP normalize(const StmtP& s);

[[nodiscard]] bool equal(const ExprP& a, const ExprP& b);
// Structural equality after normalisation.
[[nodiscard]] bool equal(const StmtP& a, const StmtP& b);

// A level slot in a typing environment.
struct Slot {
  enum class Kind { Placeholder, Base, CI };
  Kind kind = Kind::Placeholder;
  int level = 0;

  static Slot placeholder() { return {}; }
  static Slot of(Level l) { return {Kind::Base, static_cast<int>(l)}; }
  static Slot of(CILevel l) { return {Kind::CI, static_cast<int>(l)}; }
  [[nodiscard]] bool concrete() const { return kind != Kind::Placeholder; }
  [[nodiscard]] Level base() const;
  [[nodiscard]] CILevel ci() const;
  [[nodiscard]] std::string str() const;
};

bool operator==(const Slot& a, const Slot& b);

struct GammaEntry {
  std::string name;
  BaseType type;
  Slot slot;
};

class Gamma {
 public:
  Gamma() = default;
  explicit Gamma(std::vector<GammaEntry> entries);

  // Throws std::invalid_argument on a duplicate name.
  void add(const std::string& name, const BaseType& type, Slot slot);
  [[nodiscard]] bool contains(const std::string& name) const;
  [[nodiscard]] const GammaEntry& at(const std::string& name) const;
  [[nodiscard]] const GammaEntry* find(const std::string& name) const;
  void set_slot(const std::string& name, Slot slot);
  void set_type(const std::string& name, const BaseType& type);
  void erase(const std::string& name);
  [[nodiscard]] int index_of(const std::string& name) const;

  [[nodiscard]] const std::vector<GammaEntry>& entries() const { return entries_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] Level level(const std::string& name) const { return at(name).slot.base(); }
  [[nodiscard]] CILevel ci_level(const std::string& name) const { return at(name).slot.ci(); }
  [[nodiscard]] std::vector<std::string> names() const;

 private:
  void reindex();
  std::vector<GammaEntry> entries_;
  std::map<std::string, int> index_;
};

bool operator==(const Gamma& a, const Gamma& b);

struct Program {
  Gamma gamma;
  StmtP body;
};

bool operator==(const Program& a, const Program& b);

class SlicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slic
