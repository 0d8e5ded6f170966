#include "slic/ast.hpp"

#include <algorithm>

namespace slic {

Level lub(Level a, Level b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

Level lub(const std::vector<Level>& levels) {
  if (levels.empty()) throw std::invalid_argument("lub of an empty list");
  Level r = levels.front();
  for (Level l : levels) r = lub(r, l);
  return r;
}

bool leq(Level a, Level b) { return static_cast<int>(a) <= static_cast<int>(b); }

std::optional<CILevel> lub_ci(CILevel a, CILevel b) {
  if (a == b) return a;
  if (a == CILevel::L1) return b;
  if (b == CILevel::L1) return a;
  return std::nullopt;
}

bool leq_ci(CILevel a, CILevel b) { return a == b || a == CILevel::L1; }

const char* to_string(Level l) {
  switch (l) {
    case Level::Data: return "data";
    case Level::Model: return "model";
    case Level::Genquant: return "genquant";
  }
  return "?";
}

const char* to_string(CILevel l) {
  switch (l) {
    case CILevel::L1: return "l1";
    case CILevel::L2: return "l2";
    case CILevel::L3: return "l3";
  }
  return "?";
}

BaseType BaseType::real() { return BaseType{}; }

BaseType BaseType::integer(int bound) {
  if (bound < 0) throw std::invalid_argument("int<n> requires n >= 1");
  BaseType t;
  t.kind = Kind::Int;
  t.bound = bound;
  return t;
}

BaseType BaseType::array(const BaseType& elem, int size) {
  if (size < 0) throw std::invalid_argument("array size must be positive");
  BaseType t;
  t.kind = Kind::Array;
  t.elem = std::make_shared<const BaseType>(elem);
  t.size = size;
  return t;
}

bool BaseType::is_continuous() const {
  if (is_real()) return true;
  if (is_array()) return elem->is_continuous();
  return false;
}

std::string BaseType::str() const {
  switch (kind) {
    case Kind::Real: return "real";
    case Kind::Int: return bound > 0 ? "int<" + std::to_string(bound) + ">" : "int";
    case Kind::Array: {
      // Collect dimensions outermost first: real[a][b] is an array of a arrays of b.
      std::string dims;
      const BaseType* t = this;
      while (t->is_array()) {
        dims += "[" + (t->size > 0 ? std::to_string(t->size) : std::string()) + "]";
        t = t->elem.get();
      }
      return t->str() + dims;
    }
  }
  return "?";
}

bool operator==(const BaseType& a, const BaseType& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BaseType::Kind::Real: return true;
    case BaseType::Kind::Int: return a.bound == b.bound;
    case BaseType::Kind::Array: return a.size == b.size && *a.elem == *b.elem;
  }
  return false;
}

namespace {

std::shared_ptr<Expr> mk(Expr::Kind k, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->loc = loc;
  return e;
}

std::shared_ptr<Stmt> mks(Stmt::Kind k, SourceLoc loc) {
  auto s = std::make_shared<Stmt>();
  s->kind = k;
  s->loc = loc;
  return s;
}

}  // namespace

ExprP var(const std::string& name, SourceLoc loc) {
  auto e = mk(Expr::Kind::Var, loc);
  e->name = name;
  return e;
}

ExprP real_c(double v, SourceLoc loc) {
  auto e = mk(Expr::Kind::Real, loc);
  e->real = v;
  return e;
}

ExprP int_c(std::int64_t v, SourceLoc loc) {
  auto e = mk(Expr::Kind::Int, loc);
  e->ival = v;
  return e;
}

ExprP array_lit(std::vector<ExprP> elems, SourceLoc loc) {
  auto e = mk(Expr::Kind::Array, loc);
  e->args = std::move(elems);
  return e;
}

ExprP index(ExprP base, ExprP idx, SourceLoc loc) {
  auto e = mk(Expr::Kind::Index, loc);
  e->args = {std::move(base), std::move(idx)};
  return e;
}

ExprP call(const std::string& fn, std::vector<ExprP> args, SourceLoc loc) {
  auto e = mk(Expr::Kind::Call, loc);
  e->name = fn;
  e->args = std::move(args);
  return e;
}

ExprP comp(ExprP body, const std::string& binder, ExprP lo, ExprP hi, SourceLoc loc) {
  auto e = mk(Expr::Kind::Comp, loc);
  e->name = binder;
  e->args = {std::move(body), std::move(lo), std::move(hi)};
  return e;
}

ExprP target(StmtP body, SourceLoc loc) {
  auto e = mk(Expr::Kind::Target, loc);
  e->body = std::move(body);
  return e;
}

ExprP phi(std::vector<Binder> binders, StmtP body, SourceLoc loc) {
  auto e = mk(Expr::Kind::Phi, loc);
  e->binders = std::move(binders);
  e->body = std::move(body);
  return e;
}

StmtP skip() {
  static const StmtP s = mks(Stmt::Kind::Skip, {});
  return s;
}

StmtP assign(LValue lhs, ExprP rhs, SourceLoc loc) {
  auto s = mks(Stmt::Kind::Assign, loc);
  s->lhs = std::move(lhs);
  s->expr = std::move(rhs);
  return s;
}

StmtP assign(const std::string& x, ExprP rhs, SourceLoc loc) {
  return assign(LValue{x, {}, loc}, std::move(rhs), loc);
}

StmtP seq(StmtP a, StmtP b) {
  auto s = mks(Stmt::Kind::Seq, a->loc);
  s->s1 = std::move(a);
  s->s2 = std::move(b);
  return s;
}

StmtP seq(const std::vector<StmtP>& stmts) {
  std::vector<StmtP> kept;
  for (const auto& s : stmts)
    for (auto& f : flatten(s)) kept.push_back(f);
  if (kept.empty()) return skip();
  StmtP r = kept.back();
  for (auto it = kept.rbegin() + 1; it != kept.rend(); ++it) r = seq(*it, r);
  return r;
}

StmtP for_loop(const std::string& x, ExprP lo, ExprP hi, StmtP body, SourceLoc loc) {
  auto s = mks(Stmt::Kind::For, loc);
  s->name = x;
  s->lo = std::move(lo);
  s->hi = std::move(hi);
  s->s1 = std::move(body);
  return s;
}

StmtP if_else(ExprP guard, StmtP then_s, StmtP else_s, SourceLoc loc) {
  auto s = mks(Stmt::Kind::If, loc);
  s->expr = std::move(guard);
  s->s1 = std::move(then_s);
  s->s2 = else_s ? std::move(else_s) : skip();
  return s;
}

StmtP factor(ExprP e, SourceLoc loc) {
  auto s = mks(Stmt::Kind::Factor, loc);
  s->expr = std::move(e);
  return s;
}

StmtP sample(LValue lhs, const std::string& dist, std::vector<ExprP> args, SourceLoc loc) {
  auto s = mks(Stmt::Kind::Sample, loc);
  s->lhs = std::move(lhs);
  s->name = dist;
  s->args = std::move(args);
  return s;
}

StmtP sample(const std::string& x, const std::string& dist, std::vector<ExprP> args, SourceLoc loc) {
  return sample(LValue{x, {}, loc}, dist, std::move(args), loc);
}

StmtP elim(const std::string& z, int K, StmtP body, SourceLoc loc) {
  auto s = mks(Stmt::Kind::Elim, loc);
  s->name = z;
  s->K = K;
  s->s1 = std::move(body);
  return s;
}

StmtP gen(const std::string& z, int K, StmtP body, SourceLoc loc) {
  auto s = mks(Stmt::Kind::Gen, loc);
  s->name = z;
  s->K = K;
  s->s1 = std::move(body);
  return s;
}

std::vector<StmtP> flatten(const StmtP& s) {
  std::vector<StmtP> out;
  if (!s) return out;
  std::vector<StmtP> stack{s};
  while (!stack.empty()) {
    StmtP cur = stack.back();
    stack.pop_back();
    if (cur->kind == Stmt::Kind::Seq) {
      stack.push_back(cur->s2);
      stack.push_back(cur->s1);
    } else if (cur->kind != Stmt::Kind::Skip) {
      out.push_back(cur);
    }
  }
  return out;
}

StmtP normalize(const StmtP& s) {
  std::vector<StmtP> parts;
  for (const auto& p : flatten(s)) {
    switch (p->kind) {
      case Stmt::Kind::For:
        parts.push_back(for_loop(p->name, p->lo, p->hi, normalize(p->s1), p->loc));
        break;
      case Stmt::Kind::If:
        parts.push_back(if_else(p->expr, normalize(p->s1), normalize(p->s2), p->loc));
        break;
      case Stmt::Kind::Elim:
        parts.push_back(elim(p->name, p->K, normalize(p->s1), p->loc));
        break;
      case Stmt::Kind::Gen:
        parts.push_back(gen(p->name, p->K, normalize(p->s1), p->loc));
        break;
      default:
        parts.push_back(p);
    }
  }
  return seq(parts);
}

namespace {

bool equal_all(const std::vector<ExprP>& a, const std::vector<ExprP>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

bool equal_norm(const StmtP& a, const StmtP& b);

bool equal_lvalue(const LValue& a, const LValue& b) {
  return a.name == b.name && equal_all(a.indices, b.indices);
}

bool equal_single(const StmtP& a, const StmtP& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Stmt::Kind::Skip: return true;
    case Stmt::Kind::Assign: return equal_lvalue(a->lhs, b->lhs) && equal(a->expr, b->expr);
    case Stmt::Kind::Factor: return equal(a->expr, b->expr);
    case Stmt::Kind::Sample:
      return equal_lvalue(a->lhs, b->lhs) && a->name == b->name && equal_all(a->args, b->args);
    case Stmt::Kind::For:
      return a->name == b->name && equal(a->lo, b->lo) && equal(a->hi, b->hi) &&
             equal_norm(a->s1, b->s1);
    case Stmt::Kind::If:
      return equal(a->expr, b->expr) && equal_norm(a->s1, b->s1) && equal_norm(a->s2, b->s2);
    case Stmt::Kind::Elim:
    case Stmt::Kind::Gen:
      return a->name == b->name && a->K == b->K && equal_norm(a->s1, b->s1);
    case Stmt::Kind::Seq: return false;
  }
  return false;
}

bool equal_norm(const StmtP& a, const StmtP& b) {
  auto fa = flatten(a);
  auto fb = flatten(b);
  if (fa.size() != fb.size()) return false;
  for (std::size_t i = 0; i < fa.size(); ++i)
    if (!equal_single(fa[i], fb[i])) return false;
  return true;
}

}  // namespace

bool equal(const ExprP& a, const ExprP& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Var: return a->name == b->name;
    case Expr::Kind::Real: return a->real == b->real;
    case Expr::Kind::Int: return a->ival == b->ival;
    case Expr::Kind::Array:
    case Expr::Kind::Index: return equal_all(a->args, b->args);
    case Expr::Kind::Call: return a->name == b->name && equal_all(a->args, b->args);
    case Expr::Kind::Comp: return a->name == b->name && equal_all(a->args, b->args);
    case Expr::Kind::Target: return equal_norm(a->body, b->body);
    case Expr::Kind::Phi: {
      if (a->binders.size() != b->binders.size()) return false;
      for (std::size_t i = 0; i < a->binders.size(); ++i)
        if (a->binders[i].name != b->binders[i].name || a->binders[i].K != b->binders[i].K)
          return false;
      return equal_norm(a->body, b->body);
    }
  }
  return false;
}

bool equal(const StmtP& a, const StmtP& b) {
  if (!a || !b) return !a && !b;
  return equal_norm(a, b);
}

Level Slot::base() const {
  if (kind != Kind::Base) throw SlicError("slot is not a concrete base level");
  return static_cast<Level>(level);
}

CILevel Slot::ci() const {
  if (kind != Kind::CI) throw SlicError("slot is not a concrete CI level");
  return static_cast<CILevel>(level);
}

std::string Slot::str() const {
  switch (kind) {
    case Kind::Placeholder: return "?";
    case Kind::Base: return to_string(static_cast<Level>(level));
    case Kind::CI: return to_string(static_cast<CILevel>(level));
  }
  return "?";
}

bool operator==(const Slot& a, const Slot& b) {
  if (a.kind != b.kind) return false;
  return a.kind == Slot::Kind::Placeholder || a.level == b.level;
}

Gamma::Gamma(std::vector<GammaEntry> entries) : entries_(std::move(entries)) { reindex(); }

void Gamma::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].name, static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate declaration of " + entries_[i].name);
  }
}

void Gamma::add(const std::string& name, const BaseType& type, Slot slot) {
  if (contains(name)) throw std::invalid_argument("duplicate declaration of " + name);
  entries_.push_back({name, type, slot});
  index_.emplace(name, static_cast<int>(entries_.size()) - 1);
}

bool Gamma::contains(const std::string& name) const { return index_.count(name) > 0; }

const GammaEntry& Gamma::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw SlicError("unbound variable " + name);
  return entries_[it->second];
}

const GammaEntry* Gamma::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

void Gamma::set_slot(const std::string& name, Slot slot) {
  auto it = index_.find(name);
  if (it == index_.end()) throw SlicError("unbound variable " + name);
  entries_[it->second].slot = slot;
}

void Gamma::set_type(const std::string& name, const BaseType& type) {
  auto it = index_.find(name);
  if (it == index_.end()) throw SlicError("unbound variable " + name);
  entries_[it->second].type = type;
}

void Gamma::erase(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) return;
  entries_.erase(entries_.begin() + it->second);
  reindex();
}

int Gamma::index_of(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

std::vector<std::string> Gamma::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

bool operator==(const Gamma& a, const Gamma& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.entries()[i];
    const auto& y = b.entries()[i];
    if (x.name != y.name || !(x.type == y.type) || !(x.slot == y.slot)) return false;
  }
  return true;
}

bool operator==(const Program& a, const Program& b) {
  return a.gamma == b.gamma && equal(a.body, b.body);
}

}  // namespace slic
