#include "slic/interp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "slic/parser.hpp"

namespace slic {

Value Value::of_real(double v) {
  Value x;
  x.kind = Kind::Real;
  x.real = v;
  return x;
}

Value Value::of_int(std::int64_t v) {
  Value x;
  x.kind = Kind::Int;
  x.ival = v;
  return x;
}

Value Value::of_array(std::vector<Value> elems) {
  Value x;
  x.kind = Kind::Array;
  x.elems = std::move(elems);
  return x;
}

double Value::num() const {
  if (is_real()) return real;
  if (is_int()) return static_cast<double>(ival);
  throw EvalError("expected a scalar, found an array");
}

std::string Value::str() const {
  switch (kind) {
    case Kind::Real: return format_real(real);
    case Kind::Int: return std::to_string(ival);
    case Kind::Array: {
      std::string out = "[";
      for (std::size_t i = 0; i < elems.size(); ++i) out += (i ? ", " : "") + elems[i].str();
      return out + "]";
    }
  }
  return "?";
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Real: return a.real == b.real || (std::isnan(a.real) && std::isnan(b.real));
    case Value::Kind::Int: return a.ival == b.ival;
    case Value::Kind::Array: return a.elems == b.elems;
  }
  return false;
}

namespace {

std::optional<std::int64_t> as_index(const Value& v) {
  if (v.is_int()) return v.ival;
  if (v.is_real() && std::floor(v.real) == v.real && std::abs(v.real) < 9e15)
    return static_cast<std::int64_t>(v.real);
  return std::nullopt;
}

const Value& at_index(const Value& arr, const Value& idx) {
  if (!arr.is_array()) throw EvalError("indexing a non-array value");
  auto i = as_index(idx);
  if (!i) throw EvalError("index is not an integer");
  if (*i < 1 || *i > static_cast<std::int64_t>(arr.elems.size()))
    throw EvalError("index " + std::to_string(*i) + " out of range 1.." + std::to_string(arr.elems.size()));
  return arr.elems[static_cast<std::size_t>(*i - 1)];
}

Value arith(const std::string& op, const Value& a, const Value& b) {
  if (a.is_array() || b.is_array()) throw EvalError("operator " + op + " applied to an array");
  if (op == "<") return Value::of_int(a.num() < b.num());
  if (op == ">") return Value::of_int(a.num() > b.num());
  if (op == "==") return Value::of_int(a.num() == b.num());
  if (op == "/") return Value::of_real(a.num() / b.num());
  if (a.is_int() && b.is_int()) {
    if (op == "+") return Value::of_int(a.ival + b.ival);
    if (op == "-") return Value::of_int(a.ival - b.ival);
    if (op == "*") return Value::of_int(a.ival * b.ival);
  }
  if (op == "+") return Value::of_real(a.num() + b.num());
  if (op == "-") return Value::of_real(a.num() - b.num());
  if (op == "*") return Value::of_real(a.num() * b.num());
  throw EvalError("unknown operator " + op);
}

void flatten_nums(const Value& v, std::vector<double>& out) {
  if (v.is_array()) {
    for (const auto& e : v.elems) flatten_nums(e, out);
  } else {
    out.push_back(v.num());
  }
}

Value builtin(const std::string& f, const std::vector<Value>& args) {
  auto arity = [&](std::size_t n) {
    if (args.size() != n) throw EvalError(f + " expects " + std::to_string(n) + " argument(s)");
  };
  if (f == "neg") {
    arity(1);
    if (args[0].is_int()) return Value::of_int(-args[0].ival);
    return Value::of_real(-args[0].num());
  }
  if (f == "sum") {
    arity(1);
    if (!args[0].is_array()) throw EvalError("sum expects an array");
    std::vector<double> xs;
    flatten_nums(args[0], xs);
    double s = 0.0;
    for (double x : xs) s += x;
    return Value::of_real(s);
  }
  if (f == "max") {
    std::vector<double> xs;
    for (const auto& a : args) flatten_nums(a, xs);
    if (xs.empty()) throw EvalError("max of nothing");
    return Value::of_real(*std::max_element(xs.begin(), xs.end()));
  }
  if (f == "exp") {
    arity(1);
    return Value::of_real(std::exp(args[0].num()));
  }
  if (f == "log") {
    arity(1);
    return Value::of_real(std::log(args[0].num()));
  }
  if (args.size() == 2 && (f == "+" || f == "-" || f == "*" || f == "/" || f == "<" || f == ">" || f == "=="))
    return arith(f, args[0], args[1]);
  throw EvalError("unknown function " + f);
}

class Machine {
 public:
  explicit Machine(EvalCounters* c) : counters_(c) {}

  Value expr(const State& s, const ExprP& e) {
    switch (e->kind) {
      case Expr::Kind::Var: {
        auto it = s.find(e->name);
        if (it == s.end()) throw EvalError("unbound variable " + e->name);
        return it->second;
      }
      case Expr::Kind::Real: return Value::of_real(e->real);
      case Expr::Kind::Int: return Value::of_int(e->ival);
      case Expr::Kind::Array: {
        std::vector<Value> xs;
        for (const auto& a : e->args) xs.push_back(expr(s, a));
        return Value::of_array(std::move(xs));
      }
      case Expr::Kind::Index: return at_index(expr(s, e->args[0]), expr(s, e->args[1]));
      case Expr::Kind::Call: {
        std::vector<Value> args;
        for (const auto& a : e->args) args.push_back(expr(s, a));
        return builtin(e->name, args);
      }
      case Expr::Kind::Comp: {
        auto lo = as_index(expr(s, e->args[1]));
        auto hi = as_index(expr(s, e->args[2]));
        if (!lo || !hi) throw EvalError("comprehension bounds must be integers");
        std::vector<Value> xs;
        State inner = s;
        for (std::int64_t i = *lo; i <= *hi; ++i) {
          inner[e->name] = Value::of_int(i);
          xs.push_back(expr(inner, e->args[0]));
        }
        return Value::of_array(std::move(xs));
      }
      case Expr::Kind::Target: return Value::of_real(stmt(s, e->body).weight);
      case Expr::Kind::Phi: {
        State inner = s;
        return phi_table(inner, e->binders, 0, e->body);
      }
    }
    throw EvalError("unknown expression");
  }

  EvalResult stmt(const State& s, const StmtP& st) {
    EvalResult r{s, 1.0};
    exec(r.state, r.weight, st);
    return r;
  }

 private:
  // [...[target(S) | z1 in 1:K1] ... | zN in 1:KN] with z1 outermost.
  Value phi_table(State& s, const std::vector<Binder>& bs, std::size_t k, const StmtP& body) {
    if (k == bs.size()) return Value::of_real(stmt(s, body).weight);
    std::vector<Value> xs;
    for (int i = 1; i <= bs[k].K; ++i) {
      s[bs[k].name] = Value::of_int(i);
      xs.push_back(phi_table(s, bs, k + 1, body));
    }
    return Value::of_array(std::move(xs));
  }

  void update(Value& target, const std::vector<Value>& idx, std::size_t k, Value v) {
    if (k == idx.size()) {
      target = std::move(v);
      return;
    }
    if (!target.is_array()) throw EvalError("indexed assignment into a non-array value");
    auto i = as_index(idx[k]);
    if (!i || *i < 1 || *i > static_cast<std::int64_t>(target.elems.size()))
      throw EvalError("assignment index out of range");
    update(target.elems[static_cast<std::size_t>(*i - 1)], idx, k + 1, std::move(v));
  }

  Value lvalue(const State& s, const LValue& l) {
    auto it = s.find(l.name);
    if (it == s.end()) throw EvalError("unbound variable " + l.name);
    Value v = it->second;
    for (const auto& i : l.indices) v = at_index(v, expr(s, i));
    return v;
  }

  void exec(State& s, double& w, const StmtP& st) {
    switch (st->kind) {
      case Stmt::Kind::Skip: return;
      case Stmt::Kind::Seq:
        exec(s, w, st->s1);
        exec(s, w, st->s2);
        return;
      case Stmt::Kind::Assign: {
        Value v = expr(s, st->expr);
        if (st->lhs.indices.empty()) {
          s[st->lhs.name] = std::move(v);
          return;
        }
        std::vector<Value> idx;
        for (const auto& i : st->lhs.indices) idx.push_back(expr(s, i));
        auto it = s.find(st->lhs.name);
        if (it == s.end()) throw EvalError("unbound variable " + st->lhs.name);
        update(it->second, idx, 0, std::move(v));
        return;
      }
      case Stmt::Kind::If: {
        Value g = expr(s, st->expr);
        exec(s, w, g.num() != 0.0 ? st->s1 : st->s2);
        return;
      }
      case Stmt::Kind::For: {
        auto lo = as_index(expr(s, st->lo));
        auto hi = as_index(expr(s, st->hi));
        if (!lo || !hi) throw EvalError("loop bounds must be integers");
        std::optional<Value> saved;
        if (auto it = s.find(st->name); it != s.end()) saved = it->second;
        for (std::int64_t i = *lo; i <= *hi; ++i) {
          s[st->name] = Value::of_int(i);
          exec(s, w, st->s1);
        }
        if (saved) {
          s[st->name] = *saved;
        } else {
          s.erase(st->name);
        }
        return;
      }
      case Stmt::Kind::Factor: {
        if (counters_) ++counters_->factor_evals;
        Value v = expr(s, st->expr);
        w *= v.num();
        return;
      }
      case Stmt::Kind::Sample: {
        Value x = lvalue(s, st->lhs);
        std::vector<Value> args;
        for (const auto& a : st->args) args.push_back(expr(s, a));
        w *= vectorised_pdf(st->name, x, args);
        return;
      }
      case Stmt::Kind::Elim: {
        // factor(sum([target(S) | z in 1:K]))
        State inner = s;
        double total = 0.0;
        for (int k = 1; k <= st->K; ++k) {
          inner[st->name] = Value::of_int(k);
          total += stmt(inner, st->s1).weight;
        }
        if (counters_) ++counters_->factor_evals;
        w *= total;
        return;
      }
      case Stmt::Kind::Gen: {
        // z ~ categorical([target(S) | z in 1:K])
        State inner = s;
        std::vector<Value> ws;
        for (int k = 1; k <= st->K; ++k) {
          inner[st->name] = Value::of_int(k);
          ws.push_back(Value::of_real(stmt(inner, st->s1).weight));
        }
        auto it = s.find(st->name);
        if (it == s.end()) throw EvalError("unbound variable " + st->name);
        if (counters_) ++counters_->pdf_evals;
        w *= pdf("categorical", it->second, {Value::of_array(std::move(ws))});
        return;
      }
    }
  }

  // Array values are sampled elementwise with shared arguments.
  double vectorised_pdf(const std::string& dist, const Value& x, const std::vector<Value>& args) {
    if (!x.is_array()) {
      if (counters_) ++counters_->pdf_evals;
      return pdf(dist, x, args);
    }
    double w = 1.0;
    for (const auto& e : x.elems) w *= vectorised_pdf(dist, e, args);
    return w;
  }

  EvalCounters* counters_;
};

double require_prob(const Value& v, const std::string& dist) {
  double p = v.num();
  if (!(p >= 0.0 && p <= 1.0)) throw EvalError(dist + " probability " + format_real(p) + " outside [0, 1]");
  return p;
}

}  // namespace

bool is_distribution(const std::string& name) {
  return name == "normal" || name == "beta" || name == "bern" || name == "bernoulli" || name == "categorical";
}

double pdf(const std::string& dist, const Value& v, const std::vector<Value>& args) {
  auto arity = [&](std::size_t n) {
    if (args.size() != n) throw EvalError(dist + " expects " + std::to_string(n) + " argument(s)");
  };
  if (dist == "normal") {
    arity(2);
    double mu = args[0].num(), sigma = args[1].num();
    if (!(sigma > 0.0)) throw EvalError("normal scale must be positive");
    double z = (v.num() - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  if (dist == "beta") {
    arity(2);
    double a = args[0].num(), b = args[1].num();
    if (!(a > 0.0) || !(b > 0.0)) throw EvalError("beta shapes must be positive");
    double x = v.num();
    if (x < 0.0 || x > 1.0) return 0.0;
    double log_b = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    double ta = a == 1.0 ? 0.0 : (a - 1.0) * std::log(x);
    double tb = b == 1.0 ? 0.0 : (b - 1.0) * std::log1p(-x);
    return std::exp(ta + tb - log_b);
  }
  if (dist == "bern" || dist == "bernoulli") {
    arity(1);
    double p = require_prob(args[0], dist);
    auto k = as_index(v);
    if (k == 1) return 1.0 - p;
    if (k == 2) return p;
    return 0.0;
  }
  if (dist == "categorical") {
    arity(1);
    if (!args[0].is_array() || args[0].elems.empty()) throw EvalError("categorical expects a nonempty array");
    double total = 0.0;
    for (const auto& x : args[0].elems) {
      double wi = x.num();
      if (!(wi >= 0.0) || std::isinf(wi)) throw EvalError("categorical weights must be finite and nonnegative");
      total += wi;
    }
    if (!(total > 0.0)) throw EvalError("categorical weights sum to zero");
    auto k = as_index(v);
    if (!k || *k < 1 || *k > static_cast<std::int64_t>(args[0].elems.size())) return 0.0;
    return args[0].elems[static_cast<std::size_t>(*k - 1)].num() / total;
  }
  throw EvalError("unknown distribution " + dist);
}

Value eval_expr(const State& s, const ExprP& e, EvalCounters* counters) { return Machine(counters).expr(s, e); }

EvalResult eval_stmt(const State& s, const StmtP& st, EvalCounters* counters) {
  return Machine(counters).stmt(s, st);
}

EvalResult run_density(const Program& p, const State& sigma, const State& x) {
  State merged = sigma;
  for (const auto& [k, v] : x) merged[k] = v;
  return eval_stmt(merged, p.body);
}

double density(const Program& p, const State& sigma, const State& x) { return run_density(p, sigma, x).weight; }

std::pair<double, EvalCounters> density_counted(const Program& p, const State& store) {
  EvalCounters c;
  double w = eval_stmt(store, p.body, &c).weight;
  return {w, c};
}

bool conforms(const Value& v, const BaseType& t) {
  switch (t.kind) {
    case BaseType::Kind::Real: return v.is_real() || v.is_int();
    case BaseType::Kind::Int:
      if (!v.is_int()) return false;
      return t.bound == 0 || (v.ival >= 1 && v.ival <= t.bound);
    case BaseType::Kind::Array:
      if (!v.is_array()) return false;
      if (t.size > 0 && static_cast<int>(v.elems.size()) != t.size) return false;
      return std::all_of(v.elems.begin(), v.elems.end(), [&](const Value& e) { return conforms(e, *t.elem); });
  }
  return false;
}

bool conforms(const State& s, const Gamma& gamma) {
  for (const auto& [k, v] : s) {
    const GammaEntry* e = gamma.find(k);
    if (e && !conforms(v, e->type)) return false;
  }
  return true;
}

double rel_err(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

bool approx_equal(const Value& a, const Value& b, double rel_tol) {
  if (a.is_array() != b.is_array()) return false;
  if (a.is_array()) {
    if (a.elems.size() != b.elems.size()) return false;
    for (std::size_t i = 0; i < a.elems.size(); ++i)
      if (!approx_equal(a.elems[i], b.elems[i], rel_tol)) return false;
    return true;
  }
  if (a.is_int() && b.is_int()) return a.ival == b.ival;
  return rel_err(a.num(), b.num()) <= rel_tol;
}

}  // namespace slic
