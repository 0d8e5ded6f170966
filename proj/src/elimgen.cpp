#include "slic/elimgen.hpp"

#include <algorithm>

#include "slic/shred.hpp"
#include "slic/typing.hpp"
#include "slic/typing_ci.hpp"

namespace slic {

StmtP desugar(const StmtP& s) {
  if (s->kind != Stmt::Kind::Elim && s->kind != Stmt::Kind::Gen) throw SlicError("not an elim or gen statement");
  if (s->K < 1) throw SlicError("missing support bound for " + s->name);
  ExprP weights = comp(target(s->s1, s->loc), s->name, int_c(1), int_c(s->K), s->loc);
  if (s->kind == Stmt::Kind::Elim) return factor(call("sum", {weights}, s->loc), s->loc);
  return sample(s->name, "categorical", {weights}, s->loc);
}

ExprP desugar(const ExprP& e) {
  if (e->kind != Expr::Kind::Phi) throw SlicError("not a phi expression");
  ExprP out = target(e->body, e->loc);
  for (auto it = e->binders.rbegin(); it != e->binders.rend(); ++it) {
    if (it->K < 1) throw SlicError("missing support bound for " + it->name);
    out = comp(out, it->name, int_c(1), int_c(it->K), e->loc);
  }
  return out;
}

namespace {

ExprP desugar_expr(const ExprP& e) {
  auto copy = std::make_shared<Expr>(*e);
  for (auto& a : copy->args) a = desugar_expr(a);
  if (copy->body) copy->body = desugar_all(copy->body);
  if (copy->kind == Expr::Kind::Phi) return desugar(ExprP(copy));
  return copy;
}

}  // namespace

StmtP desugar_all(const StmtP& s) {
  auto copy = std::make_shared<Stmt>(*s);
  if (copy->expr) copy->expr = desugar_expr(copy->expr);
  if (copy->lo) copy->lo = desugar_expr(copy->lo);
  if (copy->hi) copy->hi = desugar_expr(copy->hi);
  for (auto& a : copy->args) a = desugar_expr(a);
  for (auto& i : copy->lhs.indices) i = desugar_expr(i);
  if (copy->s1) copy->s1 = desugar_all(copy->s1);
  if (copy->s2) copy->s2 = desugar_all(copy->s2);
  if (copy->kind == Stmt::Kind::Elim || copy->kind == Stmt::Kind::Gen) return desugar(StmtP(copy));
  return copy;
}

StmtP store_of(const StmtP& s) {
  switch (s->kind) {
    case Stmt::Kind::Factor:
    case Stmt::Kind::Sample:
    case Stmt::Kind::Elim:
    case Stmt::Kind::Gen: return skip();
    case Stmt::Kind::Skip:
    case Stmt::Kind::Assign: return s;
    case Stmt::Kind::Seq: return seq(store_of(s->s1), store_of(s->s2));
    case Stmt::Kind::For: return for_loop(s->name, s->lo, s->hi, store_of(s->s1), s->loc);
    case Stmt::Kind::If: return if_else(s->expr, store_of(s->s1), store_of(s->s2), s->loc);
  }
  return s;
}

std::vector<std::string> discrete_parameters(const Program& p) {
  Gamma base = base_levels(p);
  NameSet params = parameters(p);
  std::vector<std::string> out;
  for (const auto& e : base.entries())
    if (params.count(e.name) && e.type.is_bounded_int() && e.slot.base() == Level::Model) out.push_back(e.name);
  return out;
}

Gamma gamma_to_z(const Gamma& base, const StmtP& body, const std::string& z) {
  const GammaEntry* ze = base.find(z);
  if (!ze || !ze->type.is_bounded_int() || ze->slot.base() != Level::Model)
    throw SlicError(z + " is not a discrete model-level parameter");
  NameSet w = writes(body);
  Gamma out;
  for (const auto& e : base.entries()) {
    Level l = e.slot.base();
    if (l == Level::Genquant) continue;
    Slot s = Slot::placeholder();
    if (e.name == z) {
      s = Slot::of(CILevel::L2);
    } else if (l == Level::Data) {
      s = Slot::of(CILevel::L1);
    } else if (!w.count(e.name) && e.type.is_continuous()) {
      s = Slot::of(CILevel::L1);
    }
    out.add(e.name, e.type, s);
  }
  return out;
}

std::vector<Binder> neighbours(const Gamma& base, const Gamma& ci, const std::string& z) {
  std::vector<Binder> out;
  for (const auto& e : ci.entries()) {
    if (e.name == z || e.slot.kind != Slot::Kind::CI || e.slot.ci() != CILevel::L1) continue;
    const GammaEntry* b = base.find(e.name);
    if (b && b->type.is_bounded_int() && b->slot.base() == Level::Model) out.push_back({e.name, b->type.bound});
  }
  std::sort(out.begin(), out.end(), [](const Binder& a, const Binder& b) { return a.name < b.name; });
  return out;
}

std::string fresh_factor_name(const Gamma& gamma) {
  for (int i = 1;; ++i) {
    std::string n = "f" + std::to_string(i);
    if (!gamma.contains(n)) return n;
  }
}

Program eliminate(const Program& p, const std::string& z) {
  Gamma base = base_levels(p);
  NameSet params = parameters(p);
  const GammaEntry* ze = base.find(z);
  if (!ze || !params.count(z) || !ze->type.is_bounded_int() || ze->slot.base() != Level::Model)
    throw SlicError(z + " is not a discrete model-level parameter");
  const int K = ze->type.bound;

  Shredded top = shred(base, p.body);
  const StmtP& s_d = top[0];
  const StmtP& s_m = top[1];
  const StmtP& s_q = top[2];

  Gamma gm = gamma_to_z(base, p.body, z);
  TypingReport ci = infer_ci(gm, s_m);
  if (!ci.ok) {
    const auto& v = ci.violations.front();
    throw SlicError("CI inference for " + z + " failed: " + v.rule + ": " + v.message);
  }
  Shredded parts = shred(ci.resolved, s_m);
  std::vector<Binder> ne = neighbours(base, ci.resolved, z);

  std::string f = fresh_factor_name(base);
  ExprP table = phi(ne, elim(z, K, parts[1]));
  ExprP fref = var(f);
  for (const auto& b : ne) fref = index(fref, var(b.name));

  StmtP body = normalize(seq(std::vector<StmtP>{
      s_d, parts[0], assign(f, table), factor(fref), parts[2], gen(z, K, parts[1]), store_of(parts[1]), s_q}));

  BaseType ft = BaseType::real();
  for (auto it = ne.rbegin(); it != ne.rend(); ++it) ft = BaseType::array(ft, it->K);

  Gamma g2;
  for (const auto& e : base.entries()) {
    Slot s = Slot::placeholder();
    if (e.name == z) s = Slot::of(Level::Genquant);
    else if (params.count(e.name)) s = e.slot;
    g2.add(e.name, e.type, s);
  }
  g2.add(f, ft, Slot::placeholder());

  TypingReport r = infer_levels(Program{g2, body});
  if (!r.ok) {
    const auto& v = r.violations.front();
    throw SlicError("level inference after eliminating " + z + " failed: " + v.rule + ": " + v.message);
  }
  return Program{r.resolved, body};
}

Program transform_all(const Program& p, const ElimPlan& plan) {
  std::vector<std::string> order = plan.order.empty() ? discrete_parameters(p) : plan.order;
  std::vector<std::string> avail = discrete_parameters(p);
  for (const auto& z : order)
    if (std::find(avail.begin(), avail.end(), z) == avail.end())
      throw SlicError(z + " is not a discrete model-level parameter");
  Program q = p;
  for (const auto& z : order) q = eliminate(q, z);
  return q;
}

}  // namespace slic
