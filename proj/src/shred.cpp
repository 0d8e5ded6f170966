#include "slic/shred.hpp"

#include <map>

namespace slic {

StmtP Shredded::composed() const { return normalize(seq(std::vector<StmtP>{slices[0], slices[1], slices[2]})); }

Lattice lattice_of(const Gamma& gamma) {
  for (const auto& e : gamma.entries())
    if (e.slot.kind == Slot::Kind::CI) return Lattice::CI;
  return Lattice::Base;
}

namespace {

bool is_skip(const StmtP& s) { return s->kind == Stmt::Kind::Skip; }

StmtP join_seq(const StmtP& a, const StmtP& b) {
  if (is_skip(a)) return b;
  if (is_skip(b)) return a;
  return seq(a, b);
}

class Shredder {
 public:
  Shredder(const Gamma& g, const StmtP& root) : gamma_(g), lat_(lattice_of(g)) {
    graph_ = extract_leaves(g, root);
    for (std::size_t i = 0; i < graph_.leaves.size(); ++i) leaf_of_[graph_.leaves[i].stmt] = i;
    for (const auto& [deps, st] : graph_.guards) guard_of_[st] = deps;
  }

  std::array<StmtP, 3> run(const StmtP& s) {
    std::array<StmtP, 3> out{skip(), skip(), skip()};
    switch (s->kind) {
      case Stmt::Kind::Skip: return out;
      case Stmt::Kind::Seq: {
        auto a = run(s->s1);
        auto b = run(s->s2);
        for (int l = 0; l < 3; ++l) out[l] = join_seq(a[l], b[l]);
        return out;
      }
      case Stmt::Kind::If:
      case Stmt::Kind::For: {
        auto lvl = join_levels(gamma_, guard_of_.at(s.get()), lat_);
        if (!lvl) throw SlicError("guard levels have no upper bound");
        const int g = *lvl;
        auto a = run(s->s1);
        auto b = s->kind == Stmt::Kind::If ? run(s->s2) : std::array<StmtP, 3>{skip(), skip(), skip()};
        StmtP merged_a = skip(), merged_b = skip();
        for (int l = 0; l < 3; ++l) {
          if (l == g || lat_lt(lat_, l, g)) {
            merged_a = join_seq(merged_a, a[l]);
            merged_b = join_seq(merged_b, b[l]);
            a[l] = skip();
            b[l] = skip();
          }
        }
        a[g] = merged_a;
        b[g] = merged_b;
        for (int l = 0; l < 3; ++l) out[l] = rebuild(s, a[l], b[l]);
        return out;
      }
      default: {
        const Leaf& leaf = graph_.leaves[leaf_of_.at(s.get())];
        auto lvl = leaf_shred_level(gamma_, leaf, lat_);
        if (!lvl) throw SlicError("statement reads levels with no upper bound");
        out[*lvl] = s;
        return out;
      }
    }
  }

 private:
  static StmtP rebuild(const StmtP& s, const StmtP& a, const StmtP& b) {
    if (is_skip(a) && is_skip(b)) return skip();
    if (s->kind == Stmt::Kind::For) return for_loop(s->name, s->lo, s->hi, a, s->loc);
    return if_else(s->expr, a, b, s->loc);
  }

  const Gamma& gamma_;
  Lattice lat_;
  LeafGraph graph_;
  std::map<const Stmt*, std::size_t> leaf_of_;
  std::map<const Stmt*, NameSet> guard_of_;
};

}  // namespace

Shredded shred(const Gamma& gamma, const StmtP& s) {
  Shredder sh(gamma, s);
  return {sh.run(s)};
}

bool is_single_level(const Gamma& gamma, int level, const StmtP& s) {
  Lattice lat = lattice_of(gamma);
  LeafGraph g = extract_leaves(gamma, s);
  for (const auto& leaf : g.leaves) {
    auto lvl = leaf_shred_level(gamma, leaf, lat);
    if (!lvl || *lvl != level) return false;
  }
  return true;
}

}  // namespace slic
