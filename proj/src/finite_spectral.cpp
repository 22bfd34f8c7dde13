#include "maxspec/finite_spectral.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "maxspec/errors.hpp"
#include "maxspec/graph.hpp"
#include "maxspec/parallel.hpp"

namespace maxspec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxKarpClass = 4096;
constexpr double kSpectrumMergeTol = 1e-12;

struct InEdge {
  std::uint32_t from;
  double weight;  // natural log
};

void rotate_smallest_first(std::vector<std::size_t>& cycle) {
  const auto it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), it, cycle.end());
}

MaxScalar cycle_weight(const SparseMaxMatrix& a, const std::vector<std::size_t>& cycle) {
  MaxScalar w = MaxScalar::one();
  for (std::size_t t = 0; t < cycle.size(); ++t) w *= a.at(cycle[t], cycle[(t + 1) % cycle.size()]);
  return w;
}

bool better_cycle(const CycleWitness& cand, const std::optional<CycleWitness>& best) {
  if (!best) return true;
  if (cand.geometric_mean != best->geometric_mean) return cand.geometric_mean > best->geometric_mean;
  return cand.nodes < best->nodes;
}

}  // namespace

std::vector<std::size_t> CycleWitness::closed_path() const {
  std::vector<std::size_t> path;
  if (nodes.empty()) return path;
  path.reserve(nodes.size() + 1);
  path.push_back(nodes.front());
  for (std::size_t t = nodes.size(); t-- > 1;) path.push_back(nodes[t]);
  path.push_back(nodes.front());
  return path;
}

CycleMean class_cycle_mean(const SparseMaxMatrix& a, std::span<const std::size_t> nodes) {
  const std::size_t c = nodes.size();
  if (c == 0) return {};
  if (c == 1) {
    const MaxScalar loop = a.at(nodes[0], nodes[0]);
    if (loop.is_zero()) return {};
    return {loop, CycleWitness{{nodes[0]}, loop}};
  }
  if (c > kMaxKarpClass) throw ResourceLimit("strongly connected class too large for Karp table");

  auto local_of = [&](std::size_t g) -> std::optional<std::uint32_t> {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), g);
    if (it == nodes.end() || *it != g) return std::nullopt;
    return static_cast<std::uint32_t>(it - nodes.begin());
  };

  std::vector<std::vector<InEdge>> in(c);
  for (std::uint32_t u = 0; u < c; ++u) {
    for (const auto& e : a.row(nodes[u])) {
      if (const auto v = local_of(e.col)) in[*v].push_back({u, e.value.log()});
    }
  }

  // D[k][v]: best log-weight of a walk with k edges ending at v.
  std::vector<double> D((c + 1) * c, kNegInf);
  std::vector<std::uint32_t> pred((c + 1) * c, 0);
  for (std::size_t v = 0; v < c; ++v) D[v] = 0.0;
  for (std::size_t k = 1; k <= c; ++k) {
    const double* prev = &D[(k - 1) * c];
    double* cur = &D[k * c];
    std::uint32_t* p = &pred[k * c];
    for (std::size_t v = 0; v < c; ++v) {
      for (const auto& e : in[v]) {
        const double cand = prev[e.from] + e.weight;
        if (cand > cur[v]) {
          cur[v] = cand;
          p[v] = e.from;
        }
      }
    }
  }

  std::optional<std::size_t> best_v;
  double best_lambda = kNegInf;
  for (std::size_t v = 0; v < c; ++v) {
    const double dn = D[c * c + v];
    if (dn == kNegInf) continue;
    double lam = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c; ++k) {
      const double dk = D[k * c + v];
      if (dk == kNegInf) continue;
      lam = std::min(lam, (dn - dk) / static_cast<double>(c - k));
    }
    if (!best_v || lam > best_lambda) {
      best_lambda = lam;
      best_v = v;
    }
  }
  if (!best_v) return {};

  std::vector<std::uint32_t> walk(c + 1);
  walk[c] = static_cast<std::uint32_t>(*best_v);
  for (std::size_t k = c; k > 0; --k) walk[k - 1] = pred[k * c + walk[k]];

  // Every simple cycle cut out of the critical walk is critical; keep the
  // best by exact geometric mean.
  std::optional<CycleWitness> best;
  std::vector<long> last(c, -1);
  std::vector<std::size_t> mark(c, 0);
  std::size_t stamp = 0;
  for (std::size_t t = 0; t <= c; ++t) {
    const long s = last[walk[t]];
    last[walk[t]] = static_cast<long>(t);
    if (s < 0) continue;
    ++stamp;
    bool simple = true;
    std::vector<std::size_t> cycle;
    for (auto q = static_cast<std::size_t>(s); q < t; ++q) {
      if (mark[walk[q]] == stamp) {
        simple = false;
        break;
      }
      mark[walk[q]] = stamp;
      cycle.push_back(nodes[walk[q]]);
    }
    if (!simple) continue;
    rotate_smallest_first(cycle);
    const MaxScalar w = cycle_weight(a, cycle);
    CycleWitness cand{std::move(cycle), w.root(t - static_cast<std::size_t>(s))};
    if (better_cycle(cand, best)) best = std::move(cand);
  }
  if (!best) throw std::logic_error("critical walk without a cycle");
  return {best->geometric_mean, std::move(best)};
}

CycleMean max_cycle_geom_mean(const SparseMaxMatrix& a) {
  const Components comps = strong_components(a);
  CycleMean result;
  for (std::size_t c = 0; c < comps.classes.size(); ++c) {
    if (comps.trivial[c]) continue;
    CycleMean cm = class_cycle_mean(a, comps.classes[c]);
    if (cm.witness && better_cycle(*cm.witness, result.witness)) result = std::move(cm);
  }
  return result;
}

CycleMean max_cycle_geom_mean(const FiniteMaxMatrix& a) {
  return max_cycle_geom_mean(SparseMaxMatrix(a));
}

MaxScalar radius_finite(const FiniteMaxMatrix& a) { return max_cycle_geom_mean(a).value; }

CycleMean local_radius_witness(const SparseMaxMatrix& a, std::size_t j) {
  const auto anc = ancestors(a, j);
  CycleMean cm = max_cycle_geom_mean(a.principal_submatrix(anc));
  if (cm.witness) {
    for (auto& v : cm.witness->nodes) v = anc[v];
  }
  return cm;
}

MaxScalar local_radius_finite(const FiniteMaxMatrix& a, std::size_t j) {
  if (j >= a.dim()) throw ValidationError("local radius index out of range");
  return local_radius_witness(SparseMaxMatrix(a), j).value;
}

namespace {

std::vector<MaxScalar> all_local_radii(const SparseMaxMatrix& a) {
  std::vector<MaxScalar> out(a.dim());
  parallel_for(a.dim(), [&](std::size_t j) { out[j] = local_radius_witness(a, j).value; });
  return out;
}

std::vector<MaxScalar> distinct_sorted(std::vector<MaxScalar> values) {
  std::sort(values.begin(), values.end());
  std::vector<MaxScalar> out;
  for (const auto& v : values) {
    if (out.empty() || !log_close(out.back(), v, kSpectrumMergeTol)) out.push_back(v);
  }
  return out;
}

}  // namespace

FiniteSpectrum spectrum(const FiniteMaxMatrix& a) {
  const SparseMaxMatrix s(a);
  FiniteSpectrum out;
  CycleMean cm = max_cycle_geom_mean(s);
  out.radius = cm.value;
  out.mu = cm.value;
  out.critical_witness = std::move(cm.witness);
  out.local_radii = all_local_radii(s);
  out.point_spectrum = distinct_sorted(out.local_radii);
  return out;
}

std::vector<MaxScalar> point_spectrum_finite(const FiniteMaxMatrix& a) {
  return distinct_sorted(all_local_radii(SparseMaxMatrix(a)));
}

MaxVector eigvec_finite(const FiniteMaxMatrix& a, MaxScalar t) {
  const std::size_t n = a.dim();
  if (t.is_zero()) {
    for (std::size_t j = 0; j < n; ++j) {
      bool zero_column = true;
      for (std::size_t i = 0; i < n && zero_column; ++i) zero_column = a(i, j).is_zero();
      if (zero_column) return MaxVector::basis(n, j);
    }
    throw ValidationError("0 is not a max eigenvalue: no zero column");
  }

  const SparseMaxMatrix s(a);
  const auto radii = all_local_radii(s);
  std::optional<MaxScalar> matched;
  for (const auto& r : radii) {
    if (log_close(r, t, kSpectrumMergeTol)) {
      matched = r;
      break;
    }
  }
  if (!matched) throw ValidationError("value is not in the max point spectrum");

  // Indices whose local radius does not exceed t span an invariant cone.
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < n; ++j)
    if (radii[j] <= *matched || log_close(radii[j], *matched, kSpectrumMergeTol)) support.push_back(j);

  const SparseMaxMatrix sub = s.principal_submatrix(support);
  const Components comps = strong_components(sub);
  std::optional<std::size_t> base;
  for (std::size_t c = 0; c < comps.classes.size() && !base; ++c) {
    if (comps.trivial[c]) continue;
    const CycleMean cm = class_cycle_mean(sub, comps.classes[c]);
    if (cm.witness && log_close(cm.value, *matched, kSpectrumMergeTol)) base = cm.witness->nodes.front();
  }
  if (!base) throw std::logic_error("eigenvalue without a critical class");

  const MaxScalar inv = matched->inverse();
  MaxVector term = MaxVector::basis(support.size(), *base);
  MaxVector x = term;
  for (std::size_t m = 1; m < support.size(); ++m) {
    term = mat_vec(sub, term);
    for (std::size_t i = 0; i < term.size(); ++i) term[i] *= inv;
    x = oplus(x, term);
  }
  MaxVector full(n);
  for (std::size_t p = 0; p < support.size(); ++p) full[support[p]] = x[p];
  return full;
}

MaxScalar min_modulus(const FiniteMaxMatrix& a) {
  std::optional<MaxScalar> best;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    MaxScalar col;
    for (std::size_t i = 0; i < a.dim(); ++i) col = oplus(col, a(i, j));
    if (!best || col < *best) best = col;
  }
  return best.value_or(MaxScalar::zero());
}

LowerRadiusEstimate lower_spectral_radius(const FiniteMaxMatrix& a, std::size_t K) {
  if (K == 0) throw ValidationError("lower_spectral_radius needs K >= 1");
  LowerRadiusEstimate out;
  FiniteMaxMatrix p = a;
  for (std::size_t k = 1; k <= K; ++k) {
    out.sequence.push_back(min_modulus(p).root(k));
    if (k < K) p = otimes(p, a);
  }
  out.value = out.sequence.back();
  return out;
}

MaxVector cycle_time_vector(const FiniteMaxMatrix& a) {
  const SparseMaxMatrix t(a.transpose());
  MaxVector chi(a.dim());
  const auto radii = all_local_radii(t);
  for (std::size_t j = 0; j < a.dim(); ++j) chi[j] = radii[j];
  return chi;
}

}  // namespace maxspec
