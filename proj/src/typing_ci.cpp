#include "slic/typing_ci.hpp"

namespace slic {

namespace {

DomainPolicy all_ci_levels() {
  return [](const GammaEntry&) { return std::vector<int>{0, 1, 2}; };
}

int ci(CILevel l) { return static_cast<int>(l); }

CIPartition partition_of(const Gamma& resolved, const NameSet& params) {
  CIPartition part;
  for (const auto& e : resolved.entries()) {
    int l = e.slot.level;
    if (params.count(e.name)) {
      (l == ci(CILevel::L1) ? part.x1 : l == ci(CILevel::L2) ? part.x2 : part.x3).insert(e.name);
    } else {
      part.deterministic[static_cast<std::size_t>(l)].insert(e.name);
    }
  }
  return part;
}

}  // namespace

TypingReport check_ci(const Gamma& gamma, const StmtP& s) {
  auto sys = build_level_system(gamma, s, Lattice::CI, ci(CILevel::L1), all_ci_levels(), {0, 0, 0});
  return check_levels(gamma, sys);
}

LevelSystem ci_system(const Gamma& partial, const StmtP& s) {
  return build_level_system(partial, s, Lattice::CI, ci(CILevel::L1), all_ci_levels(), kCICost);
}

TypingReport infer_ci(const Gamma& partial, const StmtP& s) {
  return solve_levels(partial, ci_system(partial, s), Lattice::CI);
}

NameSet parameters(const Program& p) {
  NameSet w = writes(p.body);
  NameSet out;
  for (const auto& e : p.gamma.entries())
    if (!w.count(e.name)) out.insert(e.name);
  return out;
}

Gamma base_levels(const Program& p) {
  bool concrete = true;
  for (const auto& e : p.gamma.entries())
    if (e.slot.kind != Slot::Kind::Base) concrete = false;
  if (concrete) return p.gamma;
  Program q = p;
  for (const auto& e : p.gamma.entries())
    if (e.slot.kind == Slot::Kind::CI) q.gamma.set_slot(e.name, Slot::placeholder());
  TypingReport r = infer_levels(q);
  if (!r.ok) {
    const auto& v = r.violations.front();
    throw SlicError("level inference failed: " + v.rule + ": " + v.message);
  }
  return r.resolved;
}

CIQueryResult ci_query(const Program& p, const CIPartition& part) {
  NameSet params = parameters(p);
  Gamma base = base_levels(p);
  Gamma g;
  for (const auto& e : p.gamma.entries()) {
    int hits = static_cast<int>(part.x1.count(e.name) + part.x2.count(e.name) + part.x3.count(e.name));
    if (hits > 1) throw SlicError("partition sets overlap at " + e.name);
    Slot slot = Slot::placeholder();
    if (params.count(e.name)) {
      if (part.x1.count(e.name)) slot = Slot::of(CILevel::L1);
      else if (part.x2.count(e.name)) slot = Slot::of(CILevel::L2);
      else if (part.x3.count(e.name)) slot = Slot::of(CILevel::L3);
      else if (base.level(e.name) == Level::Data) slot = Slot::of(CILevel::L1);
      else throw SlicError("parameter " + e.name + " is missing from the partition");
    } else if (hits) {
      throw SlicError(e.name + " is assigned by the program and cannot be partitioned");
    }
    g.add(e.name, e.type, slot);
  }
  for (const NameSet* s : {&part.x1, &part.x2, &part.x3})
    for (const auto& x : *s)
      if (!p.gamma.contains(x)) throw SlicError("unknown variable " + x + " in partition");

  TypingReport r = infer_ci(g, p.body);
  CIQueryResult out;
  out.derivable = r.ok;
  out.witness = r.resolved;
  out.violations = r.violations;
  if (!r.ok && !r.violations.empty()) out.failing_rule = r.violations.front().rule;
  return out;
}

CIPartition markov_blanket(const Program& p, const std::string& z) {
  NameSet params = parameters(p);
  if (!params.count(z)) throw SlicError(z + " is not a parameter");
  Gamma g;
  for (const auto& e : p.gamma.entries())
    g.add(e.name, e.type, e.name == z ? Slot::of(CILevel::L2) : Slot::placeholder());
  TypingReport r = infer_ci(g, p.body);
  if (!r.ok) throw SlicError("no CI typing with " + z + " at l2");
  return partition_of(r.resolved, params);
}

}  // namespace slic
