#include "maxspec/blockform.hpp"

#include <algorithm>
#include <map>

#include "maxspec/errors.hpp"
#include "maxspec/finite_spectral.hpp"
#include "maxspec/graph.hpp"
#include "maxspec/oracle.hpp"
#include "maxspec/parallel.hpp"

namespace maxspec {

namespace {

Condensation condense(const SparseMaxMatrix& s) {
  Components comps = strong_components(s);
  Condensation out;
  out.class_of = std::move(comps.class_of);
  out.trivial = std::move(comps.trivial);
  out.classes = std::move(comps.classes);
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (const auto& e : s.row(i))
      if (out.class_of[i] != out.class_of[e.col]) out.edges.emplace_back(out.class_of[i], out.class_of[e.col]);
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

std::vector<MaxScalar> class_radii(const SparseMaxMatrix& s, const Condensation& c) {
  std::vector<MaxScalar> radii(c.classes.size());
  parallel_for(c.classes.size(), [&](std::size_t k) {
    if (!c.trivial[k]) radii[k] = class_cycle_mean(s, c.classes[k]).value;
  });
  return radii;
}

// For each class, the best radius over classes accessing it (itself
// included) and the smallest-index class attaining it.
std::vector<AccessRadius> propagate(const Condensation& c, const std::vector<MaxScalar>& radii) {
  const std::size_t m = c.classes.size();
  std::vector<std::vector<std::size_t>> preds(m);
  for (const auto& [from, to] : c.edges) preds[to].push_back(from);
  std::vector<AccessRadius> best(m);
  // Every class comes after its successors, so predecessors sit later in
  // the order: sweep from the back.
  for (std::size_t k = m; k-- > 0;) {
    AccessRadius cur;
    if (!c.trivial[k]) cur = {radii[k], k};
    for (auto p : preds[k]) {
      const auto& b = best[p];
      if (!b.class_index) continue;
      if (!cur.class_index || b.value > cur.value || (b.value == cur.value && *b.class_index < *cur.class_index))
        cur = b;
    }
    best[k] = cur;
  }
  return best;
}

std::vector<MaxScalar> access_radii(const SparseMaxMatrix& s, const Condensation& c) {
  const auto best = propagate(c, class_radii(s, c));
  std::vector<MaxScalar> out(s.dim());
  for (std::size_t j = 0; j < s.dim(); ++j) out[j] = best[c.class_of[j]].value;
  return out;
}

std::vector<Level> group_levels(const std::vector<MaxScalar>& radii) {
  std::map<MaxScalar, std::vector<std::size_t>, std::greater<>> groups;
  for (std::size_t j = 0; j < radii.size(); ++j) groups[radii[j]].push_back(j);
  std::vector<Level> out;
  for (auto& [v, idx] : groups) out.push_back({v, std::move(idx)});
  return out;
}

}  // namespace

Condensation scc_condensation(const FiniteMaxMatrix& a) { return condense(SparseMaxMatrix(a)); }

BlockDecomposition fnf(const FiniteMaxMatrix& a) {
  const SparseMaxMatrix s(a);
  Condensation c = condense(s);
  BlockDecomposition out;
  out.class_radii = class_radii(s, c);
  out.levels = group_levels(access_radii(s, c));
  for (const auto& cls : c.classes) out.permutation.insert(out.permutation.end(), cls.begin(), cls.end());
  out.classes = std::move(c.classes);
  out.trivial = std::move(c.trivial);
  out.condensation_edges = std::move(c.edges);
  return out;
}

std::vector<Level> level_decomposition(const FiniteMaxMatrix& a) {
  const SparseMaxMatrix s(a);
  return group_levels(access_radii(s, condense(s)));
}

std::vector<std::size_t> level_permutation(const FiniteMaxMatrix& a) {
  const SparseMaxMatrix s(a);
  const Condensation c = condense(s);
  const auto radii = access_radii(s, c);
  // Sort classes by decreasing level value, canonical order within a level.
  std::vector<std::size_t> order(c.classes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return radii[c.classes[x].front()] > radii[c.classes[y].front()];
  });
  std::vector<std::size_t> perm;
  for (auto k : order) perm.insert(perm.end(), c.classes[k].begin(), c.classes[k].end());
  return perm;
}

AccessRadius access_radius(const FiniteMaxMatrix& a, std::size_t j) {
  if (j >= a.dim()) throw ValidationError("access_radius index out of range");
  const SparseMaxMatrix s(a);
  const Condensation c = condense(s);
  return propagate(c, class_radii(s, c))[c.class_of[j]];
}

std::vector<MaxScalar> access_radii(const FiniteMaxMatrix& a) { return access_radii(SparseMaxMatrix(a)); }

std::vector<MaxScalar> access_radii(const SparseMaxMatrix& a) { return access_radii(a, condense(a)); }

BlockFormCheck verify_block_form(const FiniteMaxMatrix& a, const std::vector<std::vector<std::size_t>>& classes) {
  const std::size_t n = a.dim();
  std::vector<std::size_t> block(n, n);
  std::size_t covered = 0;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (classes[k].empty()) throw ValidationError("empty class in decomposition");
    for (auto i : classes[k]) {
      if (i >= n || block[i] != n) throw ValidationError("classes do not partition the index set");
      block[i] = k;
      ++covered;
    }
  }
  if (covered != n) throw ValidationError("classes do not partition the index set");

  BlockFormCheck out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!a(i, j).is_zero() && block[i] < block[j]) {
        out.ok = false;
        out.violation = {{i, j}};
        out.message = "nonzero entry above the diagonal blocks";
        return out;
      }
    }
  }
  for (const auto& cls : classes) {
    if (cls.size() == 1) continue;
    std::vector<std::size_t> sorted = cls;
    std::sort(sorted.begin(), sorted.end());
    const SparseMaxMatrix sub = SparseMaxMatrix(a).principal_submatrix(sorted);
    const Components comps = strong_components(sub);
    if (comps.classes.size() != 1) {
      out.ok = false;
      out.violation = {{sorted[comps.classes[0].front()], sorted[comps.classes[1].front()]}};
      out.message = "diagonal block is not strongly connected";
      return out;
    }
  }
  return out;
}

WindowLevels window_levels(const MatrixOracle& o, std::size_t N) {
  if (N == 0) throw ValidationError("window size must be at least 1");
  const auto t = truncate(o, N);
  const SparseMaxMatrix& s = t->sparse();
  WindowLevels out;
  out.window = N;
  out.tail_start = N + 1;
  out.levels = group_levels(access_radii(s, condense(s)));
  for (auto& lv : out.levels)
    for (auto& i : lv.indices) ++i;
  return out;
}

}  // namespace maxspec
