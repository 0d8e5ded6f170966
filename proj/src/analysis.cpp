#include "slic/analysis.hpp"

#include <algorithm>

namespace slic {

namespace {

void unite(NameSet& a, const NameSet& b) { a.insert(b.begin(), b.end()); }

// Syntactic free variables and reads. `include_lhs` selects FV (which counts
// the assigned variable) versus R (which does not).
struct Syntactic {
  bool include_lhs;

  NameSet expr(const ExprP& e) const {
    NameSet out;
    switch (e->kind) {
      case Expr::Kind::Var: out.insert(e->name); break;
      case Expr::Kind::Real:
      case Expr::Kind::Int: break;
      case Expr::Kind::Array:
      case Expr::Kind::Index:
      case Expr::Kind::Call:
        for (const auto& a : e->args) unite(out, expr(a));
        break;
      case Expr::Kind::Comp: {
        NameSet body = expr(e->args[0]);
        body.erase(e->name);
        unite(out, body);
        unite(out, expr(e->args[1]));
        unite(out, expr(e->args[2]));
        break;
      }
      case Expr::Kind::Target: unite(out, stmt(e->body)); break;
      case Expr::Kind::Phi: {
        NameSet body = stmt(e->body);
        for (const auto& b : e->binders) body.erase(b.name);
        unite(out, body);
        break;
      }
    }
    return out;
  }

  NameSet stmt(const StmtP& s) const {
    NameSet out;
    switch (s->kind) {
      case Stmt::Kind::Skip: break;
      case Stmt::Kind::Assign:
        if (include_lhs) out.insert(s->lhs.name);
        for (const auto& i : s->lhs.indices) unite(out, expr(i));
        unite(out, expr(s->expr));
        break;
      case Stmt::Kind::Seq:
        unite(out, stmt(s->s1));
        unite(out, stmt(s->s2));
        break;
      case Stmt::Kind::For: {
        NameSet body = stmt(s->s1);
        body.erase(s->name);
        unite(out, body);
        unite(out, expr(s->lo));
        unite(out, expr(s->hi));
        break;
      }
      case Stmt::Kind::If:
        unite(out, expr(s->expr));
        unite(out, stmt(s->s1));
        unite(out, stmt(s->s2));
        break;
      case Stmt::Kind::Factor: unite(out, expr(s->expr)); break;
      case Stmt::Kind::Sample:
        out.insert(s->lhs.name);
        for (const auto& i : s->lhs.indices) unite(out, expr(i));
        for (const auto& a : s->args) unite(out, expr(a));
        break;
      case Stmt::Kind::Elim: {
        NameSet body = stmt(s->s1);
        body.erase(s->name);
        unite(out, body);
        break;
      }
      case Stmt::Kind::Gen: {
        unite(out, stmt(s->s1));
        out.insert(s->name);
        break;
      }
    }
    return out;
  }
};

void collect_writes(const StmtP& s, NameSet& w, NameSet& wt) {
  switch (s->kind) {
    case Stmt::Kind::Assign: w.insert(s->lhs.name); break;
    case Stmt::Kind::Sample: wt.insert(s->lhs.name); break;
    case Stmt::Kind::Gen: wt.insert(s->name); break;
    case Stmt::Kind::Seq:
    case Stmt::Kind::If:
      collect_writes(s->s1, w, wt);
      collect_writes(s->s2, w, wt);
      break;
    case Stmt::Kind::For: {
      NameSet w2, wt2;
      collect_writes(s->s1, w2, wt2);
      w2.erase(s->name);
      wt2.erase(s->name);
      unite(w, w2);
      unite(wt, wt2);
      break;
    }
    default: break;
  }
}

using Env = std::map<std::string, NameSet>;

class DepWalker {
 public:
  explicit DepWalker(const Gamma& g) : gamma_(g) {}

  NameSet lookup(const Env& env, const std::string& x) const {
    auto it = env.find(x);
    if (it != env.end()) return it->second;
    if (!gamma_.contains(x)) throw SlicError("unbound variable " + x);
    return {x};
  }

  NameSet expr(const Env& env, const ExprP& e) const {
    NameSet out;
    switch (e->kind) {
      case Expr::Kind::Var: return lookup(env, e->name);
      case Expr::Kind::Real:
      case Expr::Kind::Int: break;
      case Expr::Kind::Array:
      case Expr::Kind::Index:
      case Expr::Kind::Call:
        for (const auto& a : e->args) unite(out, expr(env, a));
        break;
      case Expr::Kind::Comp: {
        NameSet bounds = expr(env, e->args[1]);
        unite(bounds, expr(env, e->args[2]));
        Env inner = env;
        inner[e->name] = bounds;
        out = bounds;
        unite(out, expr(inner, e->args[0]));
        break;
      }
      case Expr::Kind::Target: return body(env, e->body, {});
      case Expr::Kind::Phi: {
        std::vector<std::string> names;
        for (const auto& b : e->binders) names.push_back(b.name);
        return body(env, e->body, names);
      }
    }
    return out;
  }

  NameSet body(const Env& env, const StmtP& s, const std::vector<std::string>& binders) const {
    Env local = env;
    for (const auto& b : binders) local[b] = {};
    NameSet acc;
    walk(s, local, {}, acc);
    return acc;
  }

 private:
  void walk(const StmtP& s, Env& env, const NameSet& ctx, NameSet& acc) const {
    switch (s->kind) {
      case Stmt::Kind::Skip: break;
      case Stmt::Kind::Assign: {
        NameSet d = ctx;
        unite(d, expr(env, s->expr));
        for (const auto& i : s->lhs.indices) unite(d, expr(env, i));
        unite(acc, d);
        if (s->lhs.indices.empty()) {
          env[s->lhs.name] = d;
        } else {
          NameSet prev = lookup(env, s->lhs.name);
          unite(prev, d);
          env[s->lhs.name] = prev;
        }
        break;
      }
      case Stmt::Kind::Seq:
        walk(s->s1, env, ctx, acc);
        walk(s->s2, env, ctx, acc);
        break;
      case Stmt::Kind::For: {
        NameSet d = ctx;
        unite(d, expr(env, s->lo));
        unite(d, expr(env, s->hi));
        unite(acc, d);
        auto saved = env.find(s->name) == env.end() ? std::optional<NameSet>{}
                                                    : std::optional<NameSet>{env[s->name]};
        // Iterate to a fixpoint so loop-carried local dependencies are seen.
        for (int iter = 0; iter < 8; ++iter) {
          Env before = env;
          env[s->name] = d;
          walk(s->s1, env, d, acc);
          env.erase(s->name);
          before.erase(s->name);
          if (env == before) break;
          for (auto& [k, v] : before) {
            auto it = env.find(k);
            if (it != env.end()) unite(it->second, v);
          }
        }
        if (saved) env[s->name] = *saved;
        break;
      }
      case Stmt::Kind::If: {
        NameSet d = ctx;
        unite(d, expr(env, s->expr));
        unite(acc, d);
        Env a = env, b = env;
        walk(s->s1, a, d, acc);
        walk(s->s2, b, d, acc);
        NameSet keys;
        for (auto& [k, v] : a) keys.insert(k);
        for (auto& [k, v] : b) keys.insert(k);
        for (const auto& k : keys) {
          NameSet m = a.count(k) ? a[k] : lookup(env, k);
          unite(m, b.count(k) ? b[k] : lookup(env, k));
          env[k] = m;
        }
        break;
      }
      case Stmt::Kind::Factor:
        unite(acc, ctx);
        unite(acc, expr(env, s->expr));
        break;
      case Stmt::Kind::Sample:
        unite(acc, ctx);
        unite(acc, lookup(env, s->lhs.name));
        for (const auto& i : s->lhs.indices) unite(acc, expr(env, i));
        for (const auto& a : s->args) unite(acc, expr(env, a));
        break;
      case Stmt::Kind::Elim:
        unite(acc, ctx);
        unite(acc, body(env, s->s1, {s->name}));
        break;
      case Stmt::Kind::Gen:
        unite(acc, ctx);
        unite(acc, lookup(env, s->name));
        unite(acc, body(env, s->s1, {s->name}));
        break;
    }
  }

  const Gamma& gamma_;
};

class LeafExtractor {
 public:
  explicit LeafExtractor(const Gamma& g) : walker_(g) {}

  std::vector<int> run(const StmtP& s, Env& env, const NameSet& ctx) {
    std::vector<int> ids;
    auto add = [&](Leaf leaf) {
      leaf.ctx_deps = ctx;
      leaf.stmt = s.get();
      graph.leaves.push_back(std::move(leaf));
      ids.push_back(static_cast<int>(graph.leaves.size()) - 1);
    };
    switch (s->kind) {
      case Stmt::Kind::Skip: break;
      case Stmt::Kind::Assign:
      case Stmt::Kind::Sample: {
        Leaf l;
        l.kind = s->kind == Stmt::Kind::Assign ? Leaf::Kind::Assign : Leaf::Kind::Sample;
        l.var = s->lhs.name;
        if (env.count(l.var)) throw SlicError("cannot assign to binder " + l.var);
        walker_.lookup(env, l.var);
        for (const auto& i : s->lhs.indices) unite(l.index_deps, walker_.expr(env, i));
        if (s->kind == Stmt::Kind::Assign) {
          l.value_deps = walker_.expr(env, s->expr);
        } else {
          for (const auto& a : s->args) unite(l.value_deps, walker_.expr(env, a));
        }
        add(std::move(l));
        break;
      }
      case Stmt::Kind::Factor: {
        Leaf l;
        l.kind = Leaf::Kind::Factor;
        l.value_deps = walker_.expr(env, s->expr);
        add(std::move(l));
        break;
      }
      case Stmt::Kind::Elim:
      case Stmt::Kind::Gen: {
        Leaf l;
        l.kind = s->kind == Stmt::Kind::Elim ? Leaf::Kind::Elim : Leaf::Kind::Gen;
        l.var = s->name;
        if (l.kind == Leaf::Kind::Gen) walker_.lookup(env, l.var);
        l.value_deps = walker_.body(env, s->s1, {s->name});
        add(std::move(l));
        break;
      }
      case Stmt::Kind::Seq: {
        auto a = run(s->s1, env, ctx);
        auto b = run(s->s2, env, ctx);
        for (int i : a)
          for (int j : b) graph.seq_pairs.emplace_back(i, j);
        ids = a;
        ids.insert(ids.end(), b.begin(), b.end());
        break;
      }
      case Stmt::Kind::For: {
        NameSet bounds = walker_.expr(env, s->lo);
        unite(bounds, walker_.expr(env, s->hi));
        NameSet d = ctx;
        unite(d, bounds);
        graph.guards.emplace_back(d, s.get());
        auto saved = env.find(s->name) == env.end() ? std::optional<NameSet>{}
                                                    : std::optional<NameSet>{env[s->name]};
        env[s->name] = bounds;
        ids = run(s->s1, env, d);
        env.erase(s->name);
        if (saved) env[s->name] = *saved;
        break;
      }
      case Stmt::Kind::If: {
        NameSet d = ctx;
        unite(d, walker_.expr(env, s->expr));
        graph.guards.emplace_back(d, s.get());
        ids = run(s->s1, env, d);
        auto b = run(s->s2, env, d);
        ids.insert(ids.end(), b.begin(), b.end());
        break;
      }
    }
    return ids;
  }

  LeafGraph graph;

 private:
  DepWalker walker_;
};

}  // namespace

NameSet free_vars(const StmtP& s) { return Syntactic{true}.stmt(s); }
NameSet free_vars(const ExprP& e) { return Syntactic{true}.expr(e); }
NameSet reads(const StmtP& s) { return Syntactic{false}.stmt(s); }
NameSet reads(const ExprP& e) { return Syntactic{false}.expr(e); }

NameSet writes(const StmtP& s) {
  NameSet w, wt;
  collect_writes(s, w, wt);
  return w;
}

NameSet samples(const StmtP& s) {
  NameSet w, wt;
  collect_writes(s, w, wt);
  return wt;
}

NameSet Leaf::reads() const {
  NameSet out = index_deps;
  unite(out, value_deps);
  unite(out, ctx_deps);
  if (kind == Kind::Sample || kind == Kind::Gen) out.insert(var);
  return out;
}

NameSet Leaf::all_deps() const { return reads(); }

LeafGraph extract_leaves(const Gamma& gamma, const StmtP& s) {
  LeafExtractor ex(gamma);
  Env env;
  ex.run(s, env, {});
  return std::move(ex.graph);
}

NameSet expr_deps(const Gamma& gamma, const ExprP& e) {
  DepWalker w(gamma);
  return w.expr({}, e);
}

NameSet body_deps(const Gamma& gamma, const StmtP& body, const std::vector<std::string>& binders) {
  DepWalker w(gamma);
  return w.body({}, body, binders);
}

AnalysisSets analysis_sets(const Gamma& gamma, const StmtP& s) {
  AnalysisSets out;
  collect_writes(s, out.W, out.Wtilde);
  out.R = reads(s);
  for (const auto& x : free_vars(s))
    if (!gamma.contains(x)) throw SlicError("unbound variable " + x);

  auto level_of = [&](const std::string& x) {
    const auto& slot = gamma.at(x).slot;
    if (!slot.concrete()) throw SlicError("variable " + x + " has no concrete level");
    return slot;
  };
  bool ci = false;
  for (const auto& e : gamma.entries())
    if (e.slot.kind == Slot::Kind::CI) ci = true;

  auto join = [&](const NameSet& names) -> int {
    if (ci) {
      CILevel acc = CILevel::L1;
      for (const auto& x : names) {
        auto r = lub_ci(acc, level_of(x).ci());
        if (!r) throw SlicError("no upper bound of l2 and l3");
        acc = *r;
      }
      return static_cast<int>(acc);
    }
    Level acc = Level::Data;
    for (const auto& x : names) acc = lub(acc, level_of(x).base());
    return static_cast<int>(acc);
  };

  LeafGraph g = extract_leaves(gamma, s);
  for (const auto& leaf : g.leaves) {
    int lvl = 0;
    switch (leaf.kind) {
      case Leaf::Kind::Assign: lvl = level_of(leaf.var).level; break;
      case Leaf::Kind::Sample:
      case Leaf::Kind::Gen: lvl = join(leaf.reads()); break;
      case Leaf::Kind::Factor:
      case Leaf::Kind::Elim: lvl = ci ? join(leaf.reads()) : static_cast<int>(Level::Model); break;
    }
    unite(out.R_at[lvl], leaf.reads());
  }
  for (const auto& x : out.W) out.W_at[level_of(x).level].insert(x);
  for (const auto& x : out.Wtilde) out.Wtilde_at[level_of(x).level].insert(x);
  return out;
}

}  // namespace slic
