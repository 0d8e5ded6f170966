#include "slic/stan.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "slic/analysis.hpp"
#include "slic/elimgen.hpp"
#include "slic/parser.hpp"
#include "slic/shred.hpp"
#include "slic/typing_ci.hpp"

namespace slic {

std::string stan_type(const BaseType& t) {
  if (t.is_real()) return "real";
  if (t.is_int()) return t.bound > 0 ? "int<lower=1,upper=" + std::to_string(t.bound) + ">" : "int";
  std::vector<int> dims;
  const BaseType* cur = &t;
  while (cur->is_array()) {
    dims.push_back(cur->size);
    cur = cur->elem.get();
  }
  std::string out = "array[";
  for (std::size_t i = 0; i < dims.size(); ++i) out += (i ? ", " : "") + std::to_string(dims[i]);
  return out + "] " + stan_type(*cur);
}

std::string normalize_whitespace(const std::string& text) {
  std::string collapsed;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !collapsed.empty()) collapsed += ' ';
    space = false;
    collapsed += c;
  }
  const std::string punct = "{}();,=[]";
  std::string out;
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    char c = collapsed[i];
    if (c == ' ') {
      char prev = out.empty() ? ' ' : out.back();
      char next = i + 1 < collapsed.size() ? collapsed[i + 1] : ' ';
      if (punct.find(prev) != std::string::npos || punct.find(next) != std::string::npos) continue;
    }
    out += c;
  }
  return out;
}

namespace {

int prec(const ExprP& e) {
  if (e->kind == Expr::Kind::Call) {
    const std::string& f = e->name;
    if (f == "<" || f == ">" || f == "==") return 1;
    if (f == "+" || f == "-") return 2;
    if (f == "*" || f == "/") return 3;
    if (f == "neg") return 4;
  }
  if ((e->kind == Expr::Kind::Real && e->real < 0) || (e->kind == Expr::Kind::Int && e->ival < 0)) return 4;
  return 5;
}

std::string expr(const ExprP& e);

std::string wrap(const ExprP& e, int min) {
  std::string s = expr(e);
  return prec(e) < min ? "(" + s + ")" : s;
}

std::string args_of(const std::vector<ExprP>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + expr(xs[i]);
  return out;
}

std::string expr(const ExprP& e) {
  switch (e->kind) {
    case Expr::Kind::Var: return e->name;
    case Expr::Kind::Real: return format_real(e->real);
    case Expr::Kind::Int: return std::to_string(e->ival);
    case Expr::Kind::Array: return "{" + args_of(e->args) + "}";
    case Expr::Kind::Index: {
      std::vector<ExprP> idx;
      ExprP base = e;
      while (base->kind == Expr::Kind::Index) {
        idx.insert(idx.begin(), base->args[1]);
        base = base->args[0];
      }
      return wrap(base, 5) + "[" + args_of(idx) + "]";
    }
    case Expr::Kind::Call: {
      const std::string& f = e->name;
      if (f == "neg") return "-" + wrap(e->args[0], 5);
      if (e->args.size() == 2 && (f == "<" || f == ">" || f == "==" || f == "+" || f == "-" || f == "*" || f == "/")) {
        int p = prec(e);
        return wrap(e->args[0], p) + " " + f + " " + wrap(e->args[1], p + 1);
      }
      return f + "(" + args_of(e->args) + ")";
    }
    case Expr::Kind::Comp:
    case Expr::Kind::Target:
    case Expr::Kind::Phi: throw SlicError("expression cannot be emitted inline in Stan: " + pretty(e));
  }
  return "";
}

bool is_discrete_dist(const std::string& d) { return d == "bern" || d == "bernoulli" || d == "categorical"; }

std::string stan_dist(const std::string& d) { return d == "bern" ? "bernoulli" : d; }

std::string lvalue(const LValue& l) {
  std::string out = l.name;
  if (!l.indices.empty()) out += "[" + args_of(l.indices) + "]";
  return out;
}

// Arguments as Stan expects them: categorical weights are normalised.
std::string dist_args(const StmtP& s) {
  if (s->name == "categorical") {
    std::string w = wrap(s->args[0], 4);
    return w + " / sum(" + expr(s->args[0]) + ")";
  }
  return args_of(s->args);
}

// Log density of a sample statement.
std::string log_density(const StmtP& s) {
  std::string x = lvalue(s->lhs);
  if (s->name == "bern" || s->name == "bernoulli") x += " - 1";
  return stan_dist(s->name) + (is_discrete_dist(s->name) ? "_lpmf(" : "_lpdf(") + x + " | " + dist_args(s) + ")";
}

std::string rng_call(const StmtP& s) {
  std::string call = stan_dist(s->name) + "_rng(" + dist_args(s) + ")";
  if (s->name == "bern" || s->name == "bernoulli") call += " + 1";
  return call;
}

enum class Block { TransformedData, Model, Generated };

class Emitter {
 public:
  Emitter(const Gamma& g) : gamma_(g) {}

  // Top-level statements of one block. `decls` are the names the block must
  // declare; declarations merge into a first bare assignment when possible.
  std::string block(Block b, const std::vector<StmtP>& stmts, const std::vector<std::string>& decls) {
    block_ = b;
    out_.str("");
    std::set<std::string> merged;
    for (const auto& x : decls) {
      for (std::size_t i = 0; i < stmts.size(); ++i) {
        if (!free_vars(stmts[i]).count(x)) continue;
        const StmtP& s = stmts[i];
        bool bare = s->lhs.name == x && s->lhs.indices.empty();
        bool ok = bare && ((s->kind == Stmt::Kind::Assign && !reads(s->expr).count(x) && !has_derived(s->expr)) ||
                           (s->kind == Stmt::Kind::Sample && b == Block::Generated));
        if (ok) merge_at_[s.get()] = x;
        if (ok) merged.insert(x);
        break;
      }
    }
    std::set<std::string> scope;
    for (const auto& x : decls)
      if (!merged.count(x)) {
        line(1, stan_type(gamma_.at(x).type) + " " + x + ";");
        scope.insert(x);
      }
    for (const auto& x : decls) scope.insert(x);
    for (const auto& s : stmts) top(s, 1, scope);
    merge_at_.clear();
    return out_.str();
  }

 private:
  static bool has_derived(const ExprP& e) {
    if (e->kind == Expr::Kind::Phi || e->kind == Expr::Kind::Target || e->kind == Expr::Kind::Comp) return true;
    for (const auto& a : e->args)
      if (has_derived(a)) return true;
    return false;
  }

  void line(int indent, const std::string& text) { out_ << std::string(static_cast<std::size_t>(indent) * 2, ' ') << text << "\n"; }

  std::string fresh(const std::string& stem) { return stem + "_" + std::to_string(++counter_); }

  std::string decl_prefix(const StmtP& s) {
    auto it = merge_at_.find(s.get());
    return it == merge_at_.end() ? "" : stan_type(gamma_.at(it->second).type) + " ";
  }

  // Statement at block level.
  void top(const StmtP& s, int ind, std::set<std::string>& scope) {
    switch (s->kind) {
      case Stmt::Kind::Skip: return;
      case Stmt::Kind::Seq:
        for (const auto& p : flatten(s)) top(p, ind, scope);
        return;
      case Stmt::Kind::Assign:
        if (s->expr->kind == Expr::Kind::Phi) {
          table(s, ind, scope);
          return;
        }
        line(ind, decl_prefix(s) + lvalue(s->lhs) + " = " + expr(s->expr) + ";");
        return;
      case Stmt::Kind::Sample:
        if (block_ == Block::Generated) {
          line(ind, decl_prefix(s) + lvalue(s->lhs) + " = " + rng_call(s) + ";");
        } else if (is_discrete_dist(s->name)) {
          line(ind, "target += " + log_density(s) + ";");
        } else {
          line(ind, lvalue(s->lhs) + " ~ " + stan_dist(s->name) + "(" + args_of(s->args) + ");");
        }
        return;
      case Stmt::Kind::Factor:
        if (block_ == Block::Generated) throw SlicError("factor statement in generated quantities");
        line(ind, "target += log(" + expr(s->expr) + ");");
        return;
      case Stmt::Kind::Elim: {
        if (block_ == Block::Generated) throw SlicError("elim statement in generated quantities");
        line(ind, "{");
        std::string sum = marginal(s, ind + 1, scope);
        line(ind + 1, "target += log(" + sum + ");");
        line(ind, "}");
        return;
      }
      case Stmt::Kind::Gen: {
        if (block_ != Block::Generated) throw SlicError("gen statement outside generated quantities");
        std::string w = "gen_w", k = fresh("k");
        line(ind, "{");
        line(ind + 1, "vector[" + std::to_string(s->K) + "] " + w + ";");
        line(ind + 1, "for (" + k + " in 1:" + std::to_string(s->K) + ") {");
        line(ind + 2, s->name + " = " + k + ";");
        std::string acc = weight_of(s->s1, ind + 2, scope);
        line(ind + 2, w + "[" + k + "] = " + acc + ";");
        line(ind + 1, "}");
        line(ind + 1, s->name + " = categorical_rng(" + w + " / sum(" + w + "));");
        line(ind, "}");
        return;
      }
      case Stmt::Kind::For: {
        line(ind, "for (" + s->name + " in " + expr(s->lo) + ":" + expr(s->hi) + ") {");
        std::set<std::string> inner = scope;
        top(s->s1, ind + 1, inner);
        line(ind, "}");
        return;
      }
      case Stmt::Kind::If: {
        line(ind, "if (" + expr(s->expr) + ") {");
        std::set<std::string> a = scope, b = scope;
        top(s->s1, ind + 1, a);
        if (!flatten(s->s2).empty()) {
          line(ind, "} else {");
          top(s->s2, ind + 1, b);
        }
        line(ind, "}");
        return;
      }
    }
  }

  // f = phi(b1..bn){S}: fill the table by looping over the binders.
  void table(const StmtP& s, int ind, std::set<std::string>& scope) {
    const Expr& ph = *s->expr;
    std::string f = lvalue(s->lhs);
    int depth = ind;
    for (const auto& b : ph.binders) line(depth++, "for (" + b.name + " in 1:" + std::to_string(b.K) + ") {");
    std::string idx;
    for (std::size_t i = 0; i < ph.binders.size(); ++i) idx += (i ? ", " : "") + ph.binders[i].name;
    std::set<std::string> inner = scope;
    for (const auto& b : ph.binders) inner.insert(b.name);
    std::string acc = weight_of(ph.body, depth, inner);
    line(depth, f + (idx.empty() ? "" : "[" + idx + "]") + " = " + acc + ";");
    for (std::size_t i = 0; i < ph.binders.size(); ++i) line(--depth, "}");
  }

  // Emits a block computing the linear-domain weight of s; returns its name.
  std::string weight_of(const StmtP& s, int ind, const std::set<std::string>& scope) {
    std::string acc = fresh("acc");
    line(ind, "real " + acc + " = 1;");
    std::set<std::string> inner = scope;
    weighted(s, ind, acc, inner);
    return acc;
  }

  // Sum over z of the weight of the elim body; returns the sum's name.
  std::string marginal(const StmtP& s, int ind, const std::set<std::string>& scope) {
    std::string sum = fresh("sum");
    line(ind, "real " + sum + " = 0;");
    line(ind, "for (" + s->name + " in 1:" + std::to_string(s->K) + ") {");
    std::set<std::string> inner = scope;
    inner.insert(s->name);
    std::string acc = weight_of(s->s1, ind + 1, inner);
    line(ind + 1, sum + " += " + acc + ";");
    line(ind, "}");
    return sum;
  }

  void weighted(const StmtP& s, int ind, const std::string& acc, std::set<std::string>& scope) {
    switch (s->kind) {
      case Stmt::Kind::Skip: return;
      case Stmt::Kind::Seq:
        for (const auto& p : flatten(s)) weighted(p, ind, acc, scope);
        return;
      case Stmt::Kind::Assign: {
        std::string prefix;
        if (s->lhs.indices.empty() && !scope.count(s->lhs.name)) {
          prefix = stan_type(gamma_.at(s->lhs.name).type) + " ";
          scope.insert(s->lhs.name);
        }
        line(ind, prefix + lvalue(s->lhs) + " = " + expr(s->expr) + ";");
        return;
      }
      case Stmt::Kind::Sample: line(ind, acc + " *= exp(" + log_density(s) + ");"); return;
      case Stmt::Kind::Factor: line(ind, acc + " *= " + expr(s->expr) + ";"); return;
      case Stmt::Kind::Elim: {
        line(ind, "{");
        std::string sum = marginal(s, ind + 1, scope);
        line(ind + 1, acc + " *= " + sum + ";");
        line(ind, "}");
        return;
      }
      case Stmt::Kind::Gen: throw SlicError("gen inside a density body cannot be emitted");
      case Stmt::Kind::For: {
        line(ind, "for (" + s->name + " in " + expr(s->lo) + ":" + expr(s->hi) + ") {");
        std::set<std::string> inner = scope;
        inner.insert(s->name);
        weighted(s->s1, ind + 1, acc, inner);
        line(ind, "}");
        return;
      }
      case Stmt::Kind::If: {
        line(ind, "if (" + expr(s->expr) + ") {");
        std::set<std::string> a = scope, b = scope;
        weighted(s->s1, ind + 1, acc, a);
        if (!flatten(s->s2).empty()) {
          line(ind, "} else {");
          weighted(s->s2, ind + 1, acc, b);
        }
        line(ind, "}");
        return;
      }
    }
  }

  const Gamma& gamma_;
  Block block_ = Block::Model;
  std::ostringstream out_;
  std::map<const Stmt*, std::string> merge_at_;
  int counter_ = 0;
};

bool has_density(const StmtP& s) {
  switch (s->kind) {
    case Stmt::Kind::Factor:
    case Stmt::Kind::Sample:
    case Stmt::Kind::Elim:
    case Stmt::Kind::Gen: return true;
    case Stmt::Kind::Seq:
    case Stmt::Kind::If: return has_density(s->s1) || has_density(s->s2);
    case Stmt::Kind::For: return has_density(s->s1);
    default: return false;
  }
}

}  // namespace

std::string emit_stan(const Program& p) {
  Gamma g = base_levels(p);
  Program resolved{g, p.body};
  auto discrete = discrete_parameters(resolved);
  if (!discrete.empty())
    throw SlicError("Stan does not support discrete model parameters (" + discrete.front() +
                    "); run transform first");
  NameSet params = parameters(resolved);
  Shredded sh = shred(g, p.body);

  std::vector<std::string> data, tdata, pars, model, gq;
  for (const auto& e : g.entries()) {
    bool param = params.count(e.name) > 0;
    switch (e.slot.base()) {
      case Level::Data: (param ? data : tdata).push_back(e.name); break;
      case Level::Model: (param ? pars : model).push_back(e.name); break;
      case Level::Genquant: gq.push_back(e.name); break;
    }
  }

  // Density terms over data alone move to the model block.
  std::vector<StmtP> td_stmts, model_stmts;
  for (const auto& s : flatten(sh[0])) {
    if (has_density(s)) {
      if (!writes(s).empty()) throw SlicError("data-level statement mixes writes with density terms");
      model_stmts.push_back(s);
    } else {
      td_stmts.push_back(s);
    }
  }
  // Deterministic model-level code goes to transformed parameters so that
  // generated quantities can read it; statements mixing writes with density
  // terms stay in the model block and their variables become locals there.
  std::vector<StmtP> tp_stmts;
  NameSet model_locals;
  for (const auto& s : flatten(sh[1])) {
    if (!has_density(s)) {
      tp_stmts.push_back(s);
    } else {
      NameSet w = writes(s);
      model_locals.insert(w.begin(), w.end());
      model_stmts.push_back(s);
    }
  }
  std::vector<std::string> tpars, mlocals;
  for (const auto& x : model) (model_locals.count(x) ? mlocals : tpars).push_back(x);

  Emitter em(g);
  std::string out;
  auto emit = [&](const std::string& name, const std::string& body) {
    if (!body.empty()) out += name + " {\n" + body + "}\n";
  };
  std::string decl_data;
  for (const auto& x : data) decl_data += "  " + stan_type(g.at(x).type) + " " + x + ";\n";
  std::string decl_pars;
  for (const auto& x : pars) decl_pars += "  " + stan_type(g.at(x).type) + " " + x + ";\n";
  std::string td = em.block(Block::TransformedData, td_stmts, tdata);
  std::string tp = em.block(Block::Model, tp_stmts, tpars);
  std::string mb = em.block(Block::Model, model_stmts, mlocals);
  std::string gb = em.block(Block::Generated, flatten(sh[2]), gq);

  if (decl_data.empty() && td.empty() && decl_pars.empty() && tp.empty() && mb.empty() && gb.empty())
    return "data {\n}\nparameters {\n}\ntransformed parameters {\n}\nmodel {\n}\ngenerated quantities {\n}\n";
  emit("data", decl_data);
  emit("transformed data", td);
  emit("parameters", decl_pars);
  emit("transformed parameters", tp);
  emit("model", mb);
  emit("generated quantities", gb);
  return out;
}

}  // namespace slic
