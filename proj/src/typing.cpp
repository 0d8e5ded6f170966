#include "slic/typing.hpp"

#include <algorithm>
#include <map>

#include "slic/interp.hpp"

namespace slic {

bool lat_leq(Lattice lat, int a, int b) {
  if (lat == Lattice::Base) return a <= b;
  return a == b || a == static_cast<int>(CILevel::L1);
}

bool lat_lt(Lattice lat, int a, int b) { return a != b && lat_leq(lat, a, b); }

std::optional<int> lat_lub(Lattice lat, int a, int b) {
  if (lat == Lattice::Base) return std::max(a, b);
  auto r = lub_ci(static_cast<CILevel>(a), static_cast<CILevel>(b));
  if (!r) return std::nullopt;
  return static_cast<int>(*r);
}

int lat_bottom(Lattice) { return 0; }

Slot lat_slot(Lattice lat, int level) {
  return lat == Lattice::Base ? Slot::of(static_cast<Level>(level)) : Slot::of(static_cast<CILevel>(level));
}

std::string lat_name(Lattice lat, int level) {
  return lat == Lattice::Base ? to_string(static_cast<Level>(level)) : to_string(static_cast<CILevel>(level));
}

namespace {

constexpr int kModel = static_cast<int>(Level::Model);
constexpr int kGenquant = static_cast<int>(Level::Genquant);

int slot_level(const Gamma& gamma, const std::string& x, Lattice lat) {
  const Slot& s = gamma.at(x).slot;
  Slot::Kind want = lat == Lattice::Base ? Slot::Kind::Base : Slot::Kind::CI;
  if (s.kind != want) throw SlicError("variable " + x + " has no concrete " + (lat == Lattice::Base ? "" : "CI ") + "level");
  return s.level;
}

std::optional<int> join_vec(Lattice lat, const std::vector<int>& lev, const std::vector<int>& vars) {
  int acc = lat_bottom(lat);
  for (int v : vars) {
    auto r = lat_lub(lat, acc, lev[v]);
    if (!r) return std::nullopt;
    acc = *r;
  }
  return acc;
}

}  // namespace

std::optional<int> join_levels(const Gamma& gamma, const NameSet& names, Lattice lat) {
  int acc = lat_bottom(lat);
  for (const auto& x : names) {
    auto r = lat_lub(lat, acc, slot_level(gamma, x, lat));
    if (!r) return std::nullopt;
    acc = *r;
  }
  return acc;
}

std::optional<int> leaf_read_level(const Gamma& gamma, const Leaf& leaf, Lattice lat) {
  switch (leaf.kind) {
    case Leaf::Kind::Assign: return slot_level(gamma, leaf.var, lat);
    case Leaf::Kind::Factor:
    case Leaf::Kind::Elim:
      if (lat == Lattice::Base) return kModel;
      return join_levels(gamma, leaf.reads(), lat);
    case Leaf::Kind::Sample:
    case Leaf::Kind::Gen: return join_levels(gamma, leaf.reads(), lat);
  }
  return std::nullopt;
}

std::optional<int> leaf_shred_level(const Gamma& gamma, const Leaf& leaf, Lattice lat) {
  if (leaf.kind == Leaf::Kind::Assign) return slot_level(gamma, leaf.var, lat);
  return join_levels(gamma, leaf.reads(), lat);
}

// ---------------------------------------------------------------- base types

namespace {

using TypeEnv = std::map<std::string, BaseType>;

class TypeChecker {
 public:
  TypeChecker(const Gamma& g, std::vector<Violation>* out) : gamma_(g), out_(out) {}

  BaseType expr(const TypeEnv& env, const ExprP& e) {
    switch (e->kind) {
      case Expr::Kind::Var: return lookup(env, e->name, e->loc);
      case Expr::Kind::Real: return BaseType::real();
      case Expr::Kind::Int: return BaseType::integer();
      case Expr::Kind::Array: {
        if (e->args.empty()) return BaseType::array(BaseType::real(), 0);
        BaseType t = expr(env, e->args[0]);
        for (std::size_t i = 1; i < e->args.size(); ++i) {
          BaseType u = expr(env, e->args[i]);
          if (t.is_int() && u.is_real()) t = u;
        }
        return BaseType::array(t, static_cast<int>(e->args.size()));
      }
      case Expr::Kind::Index: {
        BaseType base = expr(env, e->args[0]);
        BaseType idx = expr(env, e->args[1]);
        if (!idx.is_int()) error("ArrEl", e->loc, "array index must be an integer");
        if (!base.is_array()) error("ArrEl", e->loc, "indexing a value of type " + base.str());
        return *base.elem;
      }
      case Expr::Kind::Call: return call(env, e);
      case Expr::Kind::Comp: {
        if (gamma_.contains(e->name)) error("ArrComp", e->loc, "comprehension binder " + e->name + " shadows a global");
        scalar_int(expr(env, e->args[1]), e->loc, "ArrComp");
        scalar_int(expr(env, e->args[2]), e->loc, "ArrComp");
        TypeEnv inner = env;
        inner[e->name] = BaseType::integer();
        return BaseType::array(expr(inner, e->args[0]), 0);
      }
      case Expr::Kind::Target: {
        TypeEnv inner = env;
        ++depth_;
        stmt(inner, e->body);
        --depth_;
        return BaseType::real();
      }
      case Expr::Kind::Phi: {
        TypeEnv inner = env;
        for (const auto& b : e->binders) inner[b.name] = BaseType::integer(b.K);
        ++depth_;
        stmt(inner, e->body);
        --depth_;
        BaseType t = BaseType::real();
        for (auto it = e->binders.rbegin(); it != e->binders.rend(); ++it) t = BaseType::array(t, it->K);
        return t;
      }
    }
    return BaseType::real();
  }

  void stmt(TypeEnv& env, const StmtP& s) {
    switch (s->kind) {
      case Stmt::Kind::Skip: return;
      case Stmt::Kind::Seq:
        stmt(env, s->s1);
        stmt(env, s->s2);
        return;
      case Stmt::Kind::Assign: {
        if (depth_ > 0 && s->lhs.indices.empty() && !env.count(s->lhs.name) && !gamma_.contains(s->lhs.name)) {
          env[s->lhs.name] = expr(env, s->expr);
          return;
        }
        BaseType lhs = lvalue(env, s->lhs);
        BaseType rhs = expr(env, s->expr);
        if (!assignable(lhs, rhs))
          error("Assign", s->loc, "cannot assign " + rhs.str() + " to " + s->lhs.name + " of type " + lhs.str());
        return;
      }
      case Stmt::Kind::Sample: {
        BaseType lhs = lvalue(env, s->lhs);
        for (const auto& a : s->args) expr(env, a);
        if (!is_distribution(s->name)) error("Sample", s->loc, "unknown distribution " + s->name);
        bool discrete = s->name == "bern" || s->name == "bernoulli" || s->name == "categorical";
        if (discrete && lhs.is_array()) error("Sample", s->loc, "sampled value must be a scalar");
        if (discrete && lhs.is_real()) error("Sample", s->loc, s->name + " is a distribution over integers");
        return;
      }
      case Stmt::Kind::Factor: {
        BaseType t = expr(env, s->expr);
        if (t.is_array()) error("Factor", s->loc, "factor expects a scalar");
        return;
      }
      case Stmt::Kind::For: {
        scalar_int(expr(env, s->lo), s->loc, "For");
        scalar_int(expr(env, s->hi), s->loc, "For");
        if (gamma_.contains(s->name)) error("For", s->loc, "loop variable " + s->name + " shadows a global");
        if (writes(s->s1).count(s->name)) error("For", s->loc, "loop variable " + s->name + " is assigned in the body");
        TypeEnv inner = env;
        inner[s->name] = BaseType::integer();
        stmt(inner, s->s1);
        return;
      }
      case Stmt::Kind::If: {
        if (expr(env, s->expr).is_array()) error("If", s->loc, "guard must be a scalar");
        TypeEnv a = env, b = env;
        stmt(a, s->s1);
        stmt(b, s->s2);
        return;
      }
      case Stmt::Kind::Elim:
      case Stmt::Kind::Gen: {
        const char* rule = s->kind == Stmt::Kind::Elim ? "Elim" : "Gen";
        if (s->K < 1) error(rule, s->loc, "support bound must be positive");
        if (s->kind == Stmt::Kind::Gen) {
          BaseType z = lookup(env, s->name, s->loc);
          if (!z.is_int()) error(rule, s->loc, s->name + " must be an integer");
        }
        TypeEnv inner = env;
        inner[s->name] = BaseType::integer(s->K);
        ++depth_;
        stmt(inner, s->s1);
        --depth_;
        return;
      }
    }
  }

 private:
  struct Abort {};

  [[noreturn]] void error(const std::string& rule, SourceLoc loc, const std::string& msg) {
    out_->push_back({rule, loc, msg});
    throw Abort{};
  }

  BaseType lookup(const TypeEnv& env, const std::string& x, SourceLoc loc) {
    if (auto it = env.find(x); it != env.end()) return it->second;
    if (const GammaEntry* e = gamma_.find(x)) return e->type;
    error("Var", loc, "unbound variable " + x);
  }

  BaseType lvalue(const TypeEnv& env, const LValue& l) {
    BaseType t = lookup(env, l.name, l.loc);
    for (const auto& i : l.indices) {
      if (!expr(env, i).is_int()) error("ArrEl", l.loc, "array index must be an integer");
      if (!t.is_array()) error("ArrEl", l.loc, "too many indices on " + l.name);
      t = *t.elem;
    }
    return t;
  }

  void scalar_int(const BaseType& t, SourceLoc loc, const std::string& rule) {
    if (!t.is_int()) error(rule, loc, "bound must be an integer");
  }

  static bool assignable(const BaseType& to, const BaseType& from) {
    if (to.is_real()) return from.is_real() || from.is_int();
    if (to.is_int()) return from.is_int();
    if (!from.is_array()) return false;
    if (to.size > 0 && from.size > 0 && to.size != from.size) return false;
    return assignable(*to.elem, *from.elem);
  }

  BaseType call(const TypeEnv& env, const ExprP& e) {
    std::vector<BaseType> args;
    for (const auto& a : e->args) args.push_back(expr(env, a));
    const std::string& f = e->name;
    auto scalars = [&] {
      for (const auto& t : args)
        if (t.is_array()) error("PrimCall", e->loc, f + " expects scalar arguments");
    };
    auto arity = [&](std::size_t n) {
      if (args.size() != n) error("PrimCall", e->loc, f + " expects " + std::to_string(n) + " argument(s)");
    };
    if (f == "<" || f == ">" || f == "==") {
      arity(2);
      scalars();
      return BaseType::integer();
    }
    if (f == "+" || f == "-" || f == "*") {
      arity(2);
      scalars();
      return args[0].is_int() && args[1].is_int() ? BaseType::integer() : BaseType::real();
    }
    if (f == "/") {
      arity(2);
      scalars();
      return BaseType::real();
    }
    if (f == "neg") {
      arity(1);
      scalars();
      return args[0].is_int() ? BaseType::integer() : BaseType::real();
    }
    if (f == "sum") {
      arity(1);
      if (!args[0].is_array()) error("PrimCall", e->loc, "sum expects an array");
      return BaseType::real();
    }
    if (f == "exp" || f == "log") {
      arity(1);
      scalars();
      return BaseType::real();
    }
    if (f == "max") {
      if (args.empty()) error("PrimCall", e->loc, "max expects arguments");
      return BaseType::real();
    }
    error("PrimCall", e->loc, "unknown function " + f);
  }

  const Gamma& gamma_;
  std::vector<Violation>* out_;
  int depth_ = 0;  // nesting inside bodies with local scope

 public:
  template <class F>
  bool guarded(F&& f) {
    try {
      f();
      return true;
    } catch (const Abort&) {
      return false;
    }
  }
};

}  // namespace

BaseType type_of(const Gamma& gamma, const ExprP& e) {
  std::vector<Violation> v;
  TypeChecker tc(gamma, &v);
  BaseType t;
  if (!tc.guarded([&] { t = tc.expr({}, e); })) throw SlicError(v.front().rule + ": " + v.front().message);
  return t;
}

std::vector<Violation> check_types(const Gamma& gamma, const StmtP& s) {
  std::vector<Violation> v;
  TypeChecker tc(gamma, &v);
  TypeEnv env;
  (void)tc.guarded([&] { tc.stmt(env, s); });
  return v;
}

// ---------------------------------------------------------------- constraints

LevelSystem build_level_system(const Gamma& gamma, const StmtP& s, Lattice lat, int stmt_level,
                               const DomainPolicy& domain, const std::array<double, 3>& cost) {
  LevelSystem sys;
  sys.static_violations = check_types(gamma, s);
  if (!sys.static_violations.empty()) return sys;

  auto& P = sys.problem;
  const Slot::Kind want = lat == Lattice::Base ? Slot::Kind::Base : Slot::Kind::CI;
  for (const auto& e : gamma.entries()) {
    if (e.slot.concrete()) {
      if (e.slot.kind != want) throw SlicError("variable " + e.name + " has a level from the other lattice");
      P.domain.push_back({e.slot.level});
      P.cost.push_back({0.0, 0.0, 0.0});
    } else {
      P.domain.push_back(domain(e));
      P.cost.push_back({cost[0], cost[1], cost[2]});
    }
  }

  LeafGraph g;
  try {
    g = extract_leaves(gamma, s);
  } catch (const SlicError& err) {
    sys.static_violations.push_back({"Var", s->loc, err.what()});
    return sys;
  }
  auto ids = [&](const NameSet& names) {
    std::vector<int> out;
    for (const auto& n : names) out.push_back(gamma.index_of(n));
    return out;
  };
  auto name = [&](int i) { return gamma.entries()[static_cast<std::size_t>(i)].name; };
  auto add = [&](std::vector<int> vars, std::function<bool(const std::vector<int>&)> pred, const std::string& rule,
                 SourceLoc loc, const std::string& msg) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    P.constraints.push_back({std::move(vars), std::move(pred), rule, loc, msg});
  };
  // Pairwise existence of joins (l2 and l3 never meet).
  auto add_join_exists = [&](const std::vector<int>& vars, const std::string& rule, SourceLoc loc) {
    if (lat == Lattice::Base) return;
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = i + 1; j < vars.size(); ++j) {
        int a = vars[i], b = vars[j];
        add({a, b}, [a, b](const std::vector<int>& lev) { return lat_lub(Lattice::CI, lev[a], lev[b]).has_value(); },
            rule, loc, "no upper bound of l2 and l3 (" + name(a) + ", " + name(b) + ")");
      }
  };
  auto add_at_least = [&](const std::vector<int>& vars, const std::string& rule, SourceLoc loc) {
    if (stmt_level == lat_bottom(lat)) return;
    add(vars,
        [lat, vars, stmt_level](const std::vector<int>& lev) {
          auto j = join_vec(lat, lev, vars);
          return j && lat_leq(lat, stmt_level, *j);
        },
        rule, loc, "statement does not type at level " + lat_name(lat, stmt_level));
  };

  for (const auto& leaf : g.leaves) {
    SourceLoc loc = leaf.stmt->loc;
    switch (leaf.kind) {
      case Leaf::Kind::Assign: {
        int x = gamma.index_of(leaf.var);
        NameSet deps = leaf.index_deps;
        deps.insert(leaf.value_deps.begin(), leaf.value_deps.end());
        deps.insert(leaf.ctx_deps.begin(), leaf.ctx_deps.end());
        for (int d : ids(deps)) {
          if (d == x) continue;
          add({d, x}, [lat, d, x](const std::vector<int>& lev) { return lat_leq(lat, lev[d], lev[x]); },
              lat == Lattice::Base ? "Assign" : "Assign2", loc,
              "assignment to " + name(x) + " reads " + name(d) + " above its level");
        }
        if (stmt_level != lat_bottom(lat)) {
          add({x}, [lat, x, stmt_level](const std::vector<int>& lev) { return lat_leq(lat, stmt_level, lev[x]); },
              "SSub", loc, name(x) + " is below the statement level");
        }
        break;
      }
      case Leaf::Kind::Sample:
      case Leaf::Kind::Factor:
      case Leaf::Kind::Elim:
      case Leaf::Kind::Gen: {
        if (lat == Lattice::CI) {
          auto vars = ids(leaf.reads());
          const char* rule = leaf.kind == Leaf::Kind::Sample ? "Sample2" : "Factor2";
          add_join_exists(vars, rule, loc);
          add_at_least(vars, rule, loc);
          break;
        }
        if (leaf.kind == Leaf::Kind::Gen) {
          int z = gamma.index_of(leaf.var);
          add({z}, [z](const std::vector<int>& lev) { return lev[z] == kGenquant; }, "Gen", loc,
              "gen requires " + name(z) + " at genquant");
          break;
        }
        if (leaf.kind == Leaf::Kind::Sample) {
          int x = gamma.index_of(leaf.var);
          auto idx = ids(leaf.index_deps);
          NameSet deps = leaf.value_deps;
          deps.insert(leaf.ctx_deps.begin(), leaf.ctx_deps.end());
          for (int d : ids(deps)) {
            std::vector<int> vars = idx;
            vars.push_back(x);
            vars.push_back(d);
            add(vars,
                [x, d, idx](const std::vector<int>& lev) {
                  int top = std::max(lev[x], kModel);
                  for (int i : idx) top = std::max(top, lev[i]);
                  return lev[d] <= top;
                },
                "Sample", loc, "sampling " + name(x) + " reads " + name(d) + " above level " + name(x) + " ⊔ model");
          }
          break;
        }
        // Factor and Elim type at model exactly.
        if (stmt_level > kModel) add({}, [](const std::vector<int>&) { return false; }, "Factor", loc,
                                     "factor statements type at model");
        NameSet deps = leaf.value_deps;
        deps.insert(leaf.ctx_deps.begin(), leaf.ctx_deps.end());
        for (int d : ids(deps))
          add({d}, [d](const std::vector<int>& lev) { return lev[d] <= kModel; },
              leaf.kind == Leaf::Kind::Factor ? "Factor" : "Elim", loc, "density term reads genquant " + name(d));
        break;
      }
    }
  }

  for (const auto& [deps, st] : g.guards) add_join_exists(ids(deps), "If2", st->loc);

  // Read level of a leaf under the levels being assigned.
  auto read_level = [lat](const Leaf& leaf, const std::vector<int>& reads, int var) {
    return [lat, kind = leaf.kind, reads, var](const std::vector<int>& lev) -> std::optional<int> {
      switch (kind) {
        case Leaf::Kind::Assign: return lev[var];
        case Leaf::Kind::Factor:
        case Leaf::Kind::Elim:
          if (lat == Lattice::Base) return kModel;
          return join_vec(lat, lev, reads);
        default: return join_vec(lat, lev, reads);
      }
    };
  };

  for (const auto& [i, j] : g.seq_pairs) {
    const Leaf& a = g.leaves[static_cast<std::size_t>(i)];
    const Leaf& b = g.leaves[static_cast<std::size_t>(j)];
    NameSet ra = a.reads();
    if (b.kind == Leaf::Kind::Assign && ra.count(b.var)) {
      int xb = gamma.index_of(b.var);
      auto reads = ids(ra);
      int xa = a.kind == Leaf::Kind::Assign ? gamma.index_of(a.var) : -1;
      auto rl = read_level(a, reads, xa);
      std::vector<int> vars = reads;
      vars.push_back(xb);
      if (xa >= 0) vars.push_back(xa);
      add(vars,
          [lat, rl, xb](const std::vector<int>& lev) {
            auto r = rl(lev);
            return !r || !lat_lt(lat, lev[xb], *r);
          },
          lat == Lattice::Base ? "Seq" : "Seq2", b.stmt->loc,
          "not shreddable: " + b.var + " is overwritten after being read at a higher level");
    }
    if (lat == Lattice::Base && !a.var.empty() && a.var == b.var) {
      bool a_samples = a.kind == Leaf::Kind::Sample || a.kind == Leaf::Kind::Gen;
      bool b_samples = b.kind == Leaf::Kind::Sample || b.kind == Leaf::Kind::Gen;
      bool a_writes = a_samples || a.kind == Leaf::Kind::Assign;
      bool b_writes = b_samples || b.kind == Leaf::Kind::Assign;
      if ((a_samples && b_writes) || (a_writes && b_samples)) {
        int v = gamma.index_of(a.var);
        add({v}, [v](const std::vector<int>& lev) { return lev[v] != kGenquant; }, "Seq", b.stmt->loc,
            "not generative: genquant " + a.var + " is sampled and overwritten");
      }
    }
  }
  return sys;
}

TypingReport solve_levels(const Gamma& gamma, const LevelSystem& sys, Lattice lat) {
  TypingReport rep;
  rep.resolved = gamma;
  if (!sys.static_violations.empty()) {
    rep.violations = sys.static_violations;
    return rep;
  }
  SolverResult r = solve(sys.problem);
  if (!r.found) {
    for (int ci : conflict_set(sys.problem)) {
      const auto& c = sys.problem.constraints[static_cast<std::size_t>(ci)];
      rep.violations.push_back({c.rule, c.loc, c.message});
    }
    if (rep.violations.empty()) rep.violations.push_back({"Infer", {}, "no level assignment exists"});
    return rep;
  }
  for (std::size_t i = 0; i < gamma.size(); ++i)
    rep.resolved.set_slot(gamma.entries()[i].name, lat_slot(lat, r.values[i]));
  rep.ok = true;
  rep.cost = r.cost;
  return rep;
}

TypingReport check_levels(const Gamma& gamma, const LevelSystem& sys) {
  TypingReport rep;
  rep.resolved = gamma;
  rep.violations = sys.static_violations;
  std::vector<int> lev;
  for (const auto& d : sys.problem.domain) lev.push_back(d.size() == 1 ? d[0] : -1);
  for (const auto& c : sys.problem.constraints) {
    bool concrete = std::all_of(c.vars.begin(), c.vars.end(), [&](int v) { return lev[v] >= 0; });
    if (!concrete) throw SlicError("checking requires concrete levels");
    if (!c.pred(lev)) rep.violations.push_back({c.rule, c.loc, c.message});
  }
  rep.ok = rep.violations.empty();
  return rep;
}

// ---------------------------------------------------------------- ⊢ API

namespace {

DomainPolicy no_placeholders() {
  return [](const GammaEntry& e) -> std::vector<int> {
    throw SlicError("variable " + e.name + " has no concrete level");
  };
}

}  // namespace

std::pair<BaseType, Level> check_expr(const Gamma& gamma, const ExprP& e) {
  BaseType t = type_of(gamma, e);
  NameSet deps = expr_deps(gamma, e);
  auto lvl = join_levels(gamma, deps, Lattice::Base);
  return {t, static_cast<Level>(*lvl)};
}

BaseType check_expr_at(const Gamma& gamma, const ExprP& e, Level level) {
  auto [t, principal] = check_expr(gamma, e);
  if (!leq(principal, level)) {
    throw SlicError(std::string(e->kind == Expr::Kind::Target ? "Target" : "ESub") + ": expression reads level " +
                    to_string(principal) + ", above " + to_string(level));
  }
  return t;
}

TypingReport check_stmt(const Gamma& gamma, const StmtP& s, Level level) {
  auto sys = build_level_system(gamma, s, Lattice::Base, static_cast<int>(level), no_placeholders(), {0, 0, 0});
  return check_levels(gamma, sys);
}

bool shreddable(const Gamma& gamma, const StmtP& s1, const StmtP& s2) {
  bool ci = std::any_of(gamma.entries().begin(), gamma.entries().end(),
                        [](const GammaEntry& e) { return e.slot.kind == Slot::Kind::CI; });
  Lattice lat = ci ? Lattice::CI : Lattice::Base;
  AnalysisSets a = analysis_sets(gamma, s1);
  AnalysisSets b = analysis_sets(gamma, s2);
  for (const auto& [l1, reads] : a.R_at)
    for (const auto& [l2, ws] : b.W_at) {
      if (!lat_lt(lat, l2, l1)) continue;
      for (const auto& x : ws)
        if (reads.count(x)) return false;
    }
  return true;
}

bool generative(const Gamma& gamma, const StmtP& s1, const StmtP& s2) {
  // Checked at genquant only: data-level observations of distinct elements of
  // one array are routinely sampled in sequence.
  AnalysisSets a = analysis_sets(gamma, s1);
  AnalysisSets b = analysis_sets(gamma, s2);
  const int l = kGenquant;
  auto get = [](const std::map<int, NameSet>& m, int k) {
    auto it = m.find(k);
    return it == m.end() ? NameSet{} : it->second;
  };
  NameSet ta = get(a.Wtilde_at, l), tb = get(b.Wtilde_at, l);
  NameSet wa = get(a.W_at, l), wb = get(b.W_at, l);
  wa.insert(ta.begin(), ta.end());
  wb.insert(tb.begin(), tb.end());
  for (const auto& x : ta)
    if (wb.count(x)) return false;
  for (const auto& x : wa)
    if (tb.count(x)) return false;
  return true;
}

DomainPolicy base_domains(const StmtP& s) {
  NameSet assigned = writes(s);
  return [assigned](const GammaEntry& e) -> std::vector<int> {
    if (assigned.count(e.name)) return {0, 1, 2};
    return {kModel, kGenquant};
  };
}

TypingReport infer_levels(const Program& p, const InferOptions& opts) {
  auto sys = build_level_system(p.gamma, p.body, Lattice::Base, 0, base_domains(p.body), opts.cost);
  return solve_levels(p.gamma, sys, Lattice::Base);
}

}  // namespace slic
