#include "slic/solver.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace slic {

namespace {

using Domains = std::vector<std::vector<int>>;

bool supported(const Constraint& c, const Domains& dom, int var, int value, std::vector<int>& asg) {
  // Enumerate the other variables of c; true if some combination satisfies it.
  std::vector<int> others;
  for (int v : c.vars)
    if (v != var) others.push_back(v);
  asg[var] = value;
  std::vector<std::size_t> pos(others.size(), 0);
  for (std::size_t k = 0; k < others.size(); ++k) {
    if (dom[others[k]].empty()) return false;
    asg[others[k]] = dom[others[k]][0];
  }
  while (true) {
    if (c.pred(asg)) return true;
    std::size_t k = 0;
    while (k < others.size()) {
      if (++pos[k] < dom[others[k]].size()) {
        asg[others[k]] = dom[others[k]][pos[k]];
        break;
      }
      pos[k] = 0;
      asg[others[k]] = dom[others[k]][0];
      ++k;
    }
    if (k == others.size()) return false;
  }
}

std::uint64_t product(const Constraint& c, const Domains& dom) {
  std::uint64_t n = 1;
  for (int v : c.vars) n *= std::max<std::size_t>(1, dom[v].size());
  return n;
}

// Generalised arc consistency on constraints with a small joint domain.
bool arc_consistency(const SolverProblem& p, Domains& dom) {
  std::vector<int> asg(dom.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : p.constraints) {
      if (product(c, dom) > 4096) continue;
      for (int v : c.vars) {
        std::vector<int> keep;
        for (int val : dom[v])
          if (supported(c, dom, v, val, asg)) keep.push_back(val);
        if (keep.size() != dom[v].size()) {
          dom[v] = std::move(keep);
          changed = true;
          if (dom[v].empty()) return false;
        }
      }
    }
  }
  return true;
}

class Search {
 public:
  explicit Search(const SolverProblem& p) : p_(p), n_(static_cast<int>(p.domain.size())) {
    by_var_.resize(n_);
    for (int ci = 0; ci < static_cast<int>(p.constraints.size()); ++ci) {
      auto vars = p.constraints[ci].vars;
      std::sort(vars.begin(), vars.end());
      vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
      for (int v : vars) by_var_[v].push_back(ci);
    }
  }

  SolverResult run() {
    Domains dom = p_.domain;
    for (auto& d : dom) order_values(d, &d - dom.data());
    for (const auto& c : p_.constraints)
      if (c.vars.empty() && !c.pred({})) return result_;
    if (!arc_consistency(p_, dom)) return result_;
    asg_.assign(n_, -1);
    best_ = std::numeric_limits<double>::infinity();
    dfs(0, 0.0, dom);
    return result_;
  }

 private:
  void order_values(std::vector<int>& d, std::ptrdiff_t v) const {
    const auto& cost = p_.cost[static_cast<std::size_t>(v)];
    std::stable_sort(d.begin(), d.end(), [&](int a, int b) {
      if (cost[a] != cost[b]) return cost[a] < cost[b];
      return a < b;
    });
  }

  double min_cost(const std::vector<int>& d, int v) const {
    double m = std::numeric_limits<double>::infinity();
    for (int val : d) m = std::min(m, p_.cost[v][val]);
    return m;
  }

  bool check_and_propagate(int var, Domains& dom) {
    for (int ci : by_var_[var]) {
      const auto& c = p_.constraints[ci];
      int unassigned = -1, count = 0;
      for (int v : c.vars)
        if (asg_[v] < 0 && v != unassigned) {
          unassigned = v;
          ++count;
        }
      if (count == 0) {
        if (!c.pred(asg_)) return false;
      } else if (count == 1) {
        std::vector<int> keep;
        for (int val : dom[unassigned]) {
          asg_[unassigned] = val;
          if (c.pred(asg_)) keep.push_back(val);
        }
        asg_[unassigned] = -1;
        if (keep.empty()) return false;
        dom[unassigned] = std::move(keep);
      }
    }
    return true;
  }

  void dfs(int i, double cost, const Domains& dom) {
    ++result_.nodes;
    if (i == n_) {
      if (cost < best_) {
        best_ = cost;
        result_.found = true;
        result_.values = asg_;
        result_.cost = cost;
      }
      return;
    }
    double bound = cost;
    for (int j = i; j < n_; ++j) bound += min_cost(dom[j], j);
    if (!(bound < best_)) return;
    for (int val : dom[i]) {
      Domains next = dom;
      next[i] = {val};
      asg_[i] = val;
      if (check_and_propagate(i, next)) dfs(i + 1, cost + p_.cost[i][val], next);
      asg_[i] = -1;
    }
  }

  const SolverProblem& p_;
  int n_;
  std::vector<std::vector<int>> by_var_;
  std::vector<int> asg_;
  double best_ = 0.0;
  SolverResult result_;
};

}  // namespace

SolverResult solve(const SolverProblem& p) { return Search(p).run(); }

std::vector<int> conflict_set(const SolverProblem& p, int max_solves) {
  std::vector<int> keep(p.constraints.size());
  std::iota(keep.begin(), keep.end(), 0);
  if (solve(p).found) return {};
  int solves = 0;
  for (std::size_t k = 0; k < keep.size() && solves < max_solves;) {
    SolverProblem q = p;
    q.constraints.clear();
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (j != k) q.constraints.push_back(p.constraints[keep[j]]);
    ++solves;
    if (!solve(q).found) {
      keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(k));
    } else {
      ++k;
    }
  }
  return keep;
}

SolverResult solve_exhaustive(const SolverProblem& p, std::uint64_t cap) {
  const std::size_t n = p.domain.size();
  std::uint64_t space = 1;
  for (const auto& d : p.domain) {
    if (d.empty()) return {};
    space *= d.size();
    if (space > cap) throw SlicError("exhaustive search space too large");
  }
  SolverResult res;
  std::vector<std::size_t> pos(n, 0);
  std::vector<int> asg(n);
  for (std::uint64_t it = 0; it < space; ++it) {
    std::uint64_t rest = it;
    double cost = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      asg[v] = p.domain[v][rest % p.domain[v].size()];
      rest /= p.domain[v].size();
      cost += p.cost[v][asg[v]];
    }
    ++res.nodes;
    if (res.found && !(cost < res.cost)) continue;
    bool ok = true;
    for (const auto& c : p.constraints)
      if (!c.pred(asg)) {
        ok = false;
        break;
      }
    if (ok) {
      res.found = true;
      res.cost = cost;
      res.values = asg;
    }
  }
  return res;
}

}  // namespace slic
