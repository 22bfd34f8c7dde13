#include "maxspec/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "maxspec/blockform.hpp"
#include "maxspec/errors.hpp"
#include "maxspec/graph.hpp"

namespace maxspec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKnownTol = 1e-4;

double rel_change(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0) return 0;
  if (!std::isfinite(scale)) return a == b ? 0 : kInf;
  return std::abs(a - b) / scale;
}

CycleWitness to_one_based(CycleWitness w, std::size_t offset = 0) {
  for (auto& v : w.nodes) v += offset + 1;
  return w;
}

PathWitness to_one_based(PathWitness w) {
  for (auto& v : w.indices) v += 1;
  return w;
}

double certified_radius_upper(const MatrixOracle& o) {
  double u = o.norm_bound();
  if (o.hints().radius_upper) u = std::min(u, *o.hints().radius_upper);
  return u;
}

void finalize(SpectralEstimate& e, double tol) {
  const bool closed = e.upper && *e.upper - e.lower <= tol * std::max(1.0, std::abs(*e.upper));
  if (e.proxy) e.converged = closed;
  else e.converged = closed || stabilized(e.schedule, tol);
  if (e.known && e.known->value && std::abs(*e.known->value - e.lower) > kKnownTol * std::max(1.0, std::abs(*e.known->value)))
    e.converged = false;
}

std::vector<std::size_t> window_schedule(const MatrixOracle&, std::size_t first, const EstimateOptions& opt) {
  if (opt.N == 0) throw ValidationError("window size must be at least 1");
  return doubling_schedule(std::max<std::size_t>(1, std::min(first, opt.N)), opt.N);
}

}  // namespace

std::vector<std::size_t> doubling_schedule(std::size_t N0, std::size_t N) {
  if (N0 == 0 || N == 0) throw ValidationError("schedule sizes must be positive");
  std::vector<std::size_t> out;
  for (std::size_t s = std::min(N0, N); s < N; s *= 2) out.push_back(s);
  out.push_back(N);
  return out;
}

bool stabilized(const std::vector<ProbeRecord>& schedule, double tol) {
  const std::size_t n = schedule.size();
  if (n < 3) return false;
  return rel_change(schedule[n - 1].value, schedule[n - 2].value) < tol &&
         rel_change(schedule[n - 2].value, schedule[n - 3].value) < tol;
}

void attach_known(SpectralEstimate& e, const KnownValue& known) {
  e.known = known;
  if (known.value && std::abs(*known.value - e.lower) > kKnownTol * std::max(1.0, std::abs(*known.value)))
    e.converged = false;
}

void attach_known(SpectralEstimate& e, const GalleryEntry& g, const std::string& key) {
  const auto it = g.known.find(key);
  if (it != g.known.end()) attach_known(e, it->second);
}

SpectralEstimate mu_estimate(const MatrixOracle& o, const EstimateOptions& opt) {
  SpectralEstimate e;
  e.quantity = "mu";
  double best = 0;
  for (auto N : window_schedule(o, opt.N0, opt)) {
    const auto t = truncate(o, N);
    CycleMean cm = max_cycle_geom_mean(t->sparse());
    const double v = cm.value.value();
    if (cm.witness && (!e.cycle || v > best)) {
      best = v;
      e.cycle = to_one_based(*cm.witness);
    }
    e.schedule.push_back({N, N, best, std::nullopt});
  }
  e.lower = best;
  e.upper = o.hints().acyclic ? 0.0 : certified_radius_upper(o);
  if (o.hints().acyclic) e.notes.push_back("acyclic hint: mu = 0 exactly");
  finalize(e, opt.tol_rel);
  return e;
}

namespace {

struct Edge {
  std::uint32_t to;
  double lw;
};

std::vector<std::vector<Edge>> log_adjacency(const SparseMaxMatrix& s) {
  std::vector<std::vector<Edge>> adj(s.dim());
  for (std::size_t u = 0; u < s.dim(); ++u)
    for (const auto& e : s.row(u)) adj[u].push_back({static_cast<std::uint32_t>(e.col), e.value.log()});
  return adj;
}

// Digraph walk order start -> ... -> end becomes i_k .. i_0.
PathWitness as_path(const SparseMaxMatrix& s, std::vector<std::size_t> end_first) {
  return path_weight(s, end_first);
}

void exact_paths(const SparseMaxMatrix& s, std::size_t K, SimplePathTable& out) {
  const std::size_t n = s.dim();
  const auto adj = log_adjacency(s);
  const std::size_t full = std::size_t{1} << n;
  constexpr std::uint8_t kNone = 0xFF;
  constexpr std::uint32_t kNoPos = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint8_t> pred(full * n, kNone);
  std::vector<std::uint32_t> pos(full, kNoPos);

  std::vector<std::uint32_t> masks;
  std::vector<double> vals;
  for (std::size_t v = 0; v < n; ++v) {
    pos[std::size_t{1} << v] = static_cast<std::uint32_t>(masks.size());
    masks.push_back(static_cast<std::uint32_t>(1u << v));
    vals.resize(masks.size() * n, kNegInf);
    vals[(masks.size() - 1) * n + v] = 0;
  }

  for (std::size_t p = 1; p <= K; ++p) {
    std::vector<std::uint32_t> next_masks;
    std::vector<double> next_vals;
    for (std::size_t mi = 0; mi < masks.size(); ++mi) {
      const std::uint32_t mask = masks[mi];
      for (std::size_t v = 0; v < n; ++v) {
        const double val = vals[mi * n + v];
        if (val == kNegInf) continue;
        for (const auto& e : adj[v]) {
          if (mask >> e.to & 1u) continue;
          const std::uint32_t nm = mask | (1u << e.to);
          if (pos[nm] == kNoPos) {
            pos[nm] = static_cast<std::uint32_t>(next_masks.size());
            next_masks.push_back(nm);
            next_vals.resize(next_masks.size() * n, kNegInf);
          }
          double& slot = next_vals[std::size_t{pos[nm]} * n + e.to];
          std::uint8_t& pr = pred[std::size_t{nm} * n + e.to];
          const double cand = val + e.lw;
          if (cand > slot || (cand == slot && v < pr)) {
            slot = cand;
            pr = static_cast<std::uint8_t>(v);
          }
        }
      }
    }
    if (next_masks.empty()) break;
    masks = std::move(next_masks);
    vals = std::move(next_vals);

    std::optional<std::pair<std::uint32_t, std::size_t>> best;
    double best_val = kNegInf;
    for (std::size_t mi = 0; mi < masks.size(); ++mi)
      for (std::size_t w = 0; w < n; ++w) {
        const double val = vals[mi * n + w];
        if (val == kNegInf) continue;
        if (!best || val > best_val || (val == best_val && std::make_pair(w, masks[mi]) < std::make_pair(best->second, best->first))) {
          best_val = val;
          best = {masks[mi], w};
        }
      }
    std::vector<std::size_t> seq;
    std::uint32_t mask = best->first;
    std::size_t cur = best->second;
    seq.push_back(cur);
    while (std::popcount(mask) > 1) {
      const std::size_t v = pred[std::size_t{mask} * n + cur];
      mask &= ~(1u << cur);
      cur = v;
      seq.push_back(cur);
    }
    PathWitness w = as_path(s, seq);
    out.c[p] = w.weight;
    out.witness[p] = to_one_based(std::move(w));
  }
}

void beam_paths(const SparseMaxMatrix& s, std::size_t K, std::size_t width, SimplePathTable& out) {
  const std::size_t n = s.dim();
  const auto adj = log_adjacency(s);
  // h[r][v]: best walk weight with r more edges from v; an optimistic
  // continuation score since walks include simple paths.
  std::vector<std::vector<double>> h(K + 1, std::vector<double>(n, kNegInf));
  std::fill(h[0].begin(), h[0].end(), 0.0);
  for (std::size_t r = 1; r <= K; ++r)
    for (std::size_t v = 0; v < n; ++v)
      for (const auto& e : adj[v]) h[r][v] = std::max(h[r][v], e.lw + h[r - 1][e.to]);

  const std::size_t words = (n + 63) / 64;
  struct State {
    std::uint32_t last;
    std::uint32_t parent;
    double val;
  };
  struct Cand {
    double score;
    double val;
    std::uint32_t parent;
    std::uint32_t to;
  };
  auto better = [](const Cand& a, const Cand& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.val != b.val) return a.val > b.val;
    if (a.parent != b.parent) return a.parent < b.parent;
    return a.to < b.to;
  };

  std::vector<std::vector<State>> layers;
  std::vector<std::uint64_t> bits;
  {
    std::vector<Cand> starts;
    for (std::size_t v = 0; v < n; ++v) starts.push_back({h[K][v], 0, 0, static_cast<std::uint32_t>(v)});
    const std::size_t keep = std::min(width, starts.size());
    std::partial_sort(starts.begin(), starts.begin() + static_cast<long>(keep), starts.end(), better);
    std::vector<State> layer;
    bits.assign(keep * words, 0);
    for (std::size_t q = 0; q < keep; ++q) {
      layer.push_back({starts[q].to, 0, 0});
      bits[q * words + starts[q].to / 64] |= std::uint64_t{1} << (starts[q].to % 64);
    }
    layers.push_back(std::move(layer));
  }

  for (std::size_t p = 1; p <= K; ++p) {
    const auto& cur = layers.back();
    std::vector<Cand> cands;
    for (std::size_t q = 0; q < cur.size(); ++q) {
      const std::uint64_t* b = &bits[q * words];
      for (const auto& e : adj[cur[q].last]) {
        if (b[e.to / 64] >> (e.to % 64) & 1u) continue;
        const double val = cur[q].val + e.lw;
        cands.push_back({val + h[K - p][e.to], val, static_cast<std::uint32_t>(q), e.to});
      }
    }
    if (cands.empty()) break;
    const std::size_t keep = std::min(width, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<long>(keep), cands.end(), better);
    std::vector<State> layer;
    std::vector<std::uint64_t> next_bits(keep * words);
    std::size_t best = 0;
    for (std::size_t q = 0; q < keep; ++q) {
      const auto& c = cands[q];
      layer.push_back({c.to, c.parent, c.val});
      std::copy_n(&bits[std::size_t{c.parent} * words], words, &next_bits[q * words]);
      next_bits[q * words + c.to / 64] |= std::uint64_t{1} << (c.to % 64);
      if (c.val > layer[best].val) best = q;
    }
    bits = std::move(next_bits);
    layers.push_back(std::move(layer));

    std::vector<std::size_t> seq;
    std::size_t idx = best;
    for (std::size_t l = layers.size(); l-- > 0;) {
      seq.push_back(layers[l][idx].last);
      idx = layers[l][idx].parent;
    }
    PathWitness w = as_path(s, seq);
    out.c[p] = w.weight;
    out.witness[p] = to_one_based(std::move(w));
  }
}

}  // namespace

SimplePathTable simple_path_table(const MatrixOracle& o, std::size_t N, std::size_t K, std::optional<bool> exact,
                                  std::size_t beam_width) {
  if (N == 0) throw ValidationError("window size must be at least 1");
  if (beam_width == 0) throw ValidationError("beam width must be positive");
  const bool use_exact = exact.value_or(N <= 20);
  if (use_exact && N > 20) throw ResourceLimit("exact simple-path search is limited to windows of 20");
  const auto t = truncate(o, N);
  SimplePathTable out;
  out.N = N;
  out.exact = use_exact;
  out.c.assign(K + 1, MaxScalar::zero());
  out.witness.assign(K + 1, std::nullopt);
  out.c[0] = MaxScalar::one();
  out.witness[0] = PathWitness{{1}, MaxScalar::one()};
  const std::size_t horizon = std::min(K, N - 1);
  if (horizon == 0) return out;
  if (use_exact) exact_paths(t->sparse(), horizon, out);
  else beam_paths(t->sparse(), horizon, beam_width, out);
  return out;
}

SpectralEstimate simple_path_sup(const MatrixOracle& o, std::size_t N, std::size_t k, std::optional<bool> exact,
                                 std::size_t beam_width) {
  const auto table = simple_path_table(o, N, k, exact, beam_width);
  SpectralEstimate e;
  e.quantity = "c_" + std::to_string(k);
  e.lower = table.c[k].value();
  e.exact = table.exact;
  e.path = table.witness[k];
  const double up = std::pow(o.norm_bound(), static_cast<double>(k));
  if (std::isfinite(up)) e.upper = up;
  e.schedule.push_back({N, k, e.lower, std::nullopt});
  if (!table.exact) e.notes.push_back("beam search: value is a lower bound of the window optimum");
  return e;
}

std::vector<std::size_t> default_tail_schedule(std::size_t N) {
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n <= N / 2 && n < N; n *= 2) out.push_back(n);
  if (out.empty() && N > 1) out.push_back(N - 1);
  return out;
}

namespace {

std::optional<double> tail_upper(const MatrixOracle& o, std::size_t N) {
  if (!o.hints().tail_norm) return std::nullopt;
  double best = o.hints().tail_norm(0);
  for (auto n : default_tail_schedule(N)) best = std::min(best, o.hints().tail_norm(n));
  return best;
}

}  // namespace

SpectralEstimate r_prime_estimate(const MatrixOracle& o, const EstimateOptions& opt, std::optional<std::size_t> k_lo) {
  if (opt.K == 0) throw ValidationError("K must be at least 1");
  const std::size_t lo = std::max<std::size_t>(1, k_lo.value_or(opt.K / 2));
  if (lo > opt.K) throw ValidationError("k window is empty");
  const auto table = simple_path_table(o, opt.N, opt.K, opt.N <= opt.exact_path_limit, opt.beam_width);
  SpectralEstimate e;
  e.quantity = "r_prime";
  e.proxy = true;
  e.exact = table.exact;
  double best = 0;
  std::size_t arg = lo;
  nlohmann::json roots = nlohmann::json::array();
  for (std::size_t k = lo; k <= opt.K; ++k) {
    const double v = table.c[k].root(k).value();
    roots.push_back({{"k", k}, {"value", v}});
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  e.lower = best;
  e.path = table.witness[arg];
  double up = certified_radius_upper(o);
  if (const auto tu = tail_upper(o, opt.N)) up = std::min(up, *tu);
  e.upper = up;
  e.schedule.push_back({opt.N, opt.K, best, std::nullopt});
  e.details["k_window"] = {lo, opt.K};
  e.details["argmax_k"] = arg;
  e.details["c_root"] = std::move(roots);
  e.notes.push_back("window proxy for a limsup over k; not a certified bound");
  if (!table.exact) e.notes.push_back("beam search for c_k");
  finalize(e, opt.tol_rel);
  return e;
}

SpectralEstimate r_ess_estimate(const MatrixOracle& o, const std::vector<std::size_t>& n_schedule, const EstimateOptions& opt) {
  if (n_schedule.empty()) throw ValidationError("tail schedule is empty");
  for (std::size_t q = 0; q < n_schedule.size(); ++q) {
    if (q > 0 && n_schedule[q] <= n_schedule[q - 1]) throw ValidationError("tail schedule must be strictly increasing");
    if (n_schedule[q] >= opt.N) throw ValidationError("every tail offset must be below N");
  }
  SpectralEstimate e;
  e.quantity = "r_ess";
  double heuristic = kInf;
  for (auto n : n_schedule) {
    const auto t = tail_truncate(o, n, opt.N);
    const double v = max_cycle_geom_mean(t->sparse()).value.value();
    e.schedule.push_back({opt.N, opt.N - n, v, n});
    heuristic = std::min(heuristic, v);
  }
  e.lower = 0;
  e.heuristic = heuristic;
  double up = certified_radius_upper(o);
  if (o.hints().tail_norm)
    for (auto n : n_schedule) up = std::min(up, o.hints().tail_norm(n));
  e.upper = up;
  e.notes.push_back("tail-window radii under-approximate r(P_n A P_n); only the upper bound is certified");
  finalize(e, opt.tol_rel);
  return e;
}

SpectralEstimate local_radius_estimate(const MatrixOracle& o, std::size_t j, const EstimateOptions& opt) {
  if (j == 0 || j > opt.N) throw ValidationError("local radius index must lie in 1..N");
  SpectralEstimate e;
  e.quantity = "local_radius";
  e.details["j"] = j;
  double best = 0;
  for (auto N : window_schedule(o, std::max(opt.N0, j), opt)) {
    const auto t = truncate(o, N);
    CycleMean cm = local_radius_witness(t->sparse(), j - 1);
    const double v = cm.value.value();
    if (cm.witness && (!e.cycle || v > best)) {
      best = v;
      e.cycle = to_one_based(*cm.witness);
    }
    e.schedule.push_back({N, N, best, std::nullopt});
  }
  e.lower = best;
  e.upper = certified_radius_upper(o);
  finalize(e, opt.tol_rel);
  return e;
}

SpectralEstimate m_estimate(const MatrixOracle& o, std::optional<std::size_t> J, const EstimateOptions& opt) {
  SpectralEstimate e;
  e.quantity = "m";
  double best = 0;
  std::optional<std::size_t> arg;
  for (auto N : window_schedule(o, opt.N0, opt)) {
    const auto t = truncate(o, N);
    const auto radii = access_radii(t->sparse());
    const std::size_t limit = std::min(J.value_or(N), N);
    std::size_t local_arg = 0;
    for (std::size_t j = 1; j < limit; ++j)
      if (radii[j] > radii[local_arg]) local_arg = j;
    const double v = radii[local_arg].value();
    if (!arg || v > best) {
      best = v;
      arg = local_arg + 1;
      CycleMean cm = local_radius_witness(t->sparse(), local_arg);
      e.cycle = cm.witness ? std::optional<CycleWitness>(to_one_based(*cm.witness)) : std::nullopt;
    }
    e.schedule.push_back({N, N, best, std::nullopt});
  }
  e.lower = best;
  e.upper = certified_radius_upper(o);
  e.details["argmax_j"] = *arg;
  finalize(e, opt.tol_rel);
  return e;
}

SpectralEstimate m_e_estimate(const MatrixOracle& o, std::optional<std::size_t> J_window, const EstimateOptions& opt) {
  SpectralEstimate e;
  e.quantity = "m_e";
  e.proxy = true;
  double last = 0;
  std::size_t width = 0;
  for (auto N : window_schedule(o, opt.N0, opt)) {
    const auto t = truncate(o, N);
    const auto radii = access_radii(t->sparse());
    width = std::clamp<std::size_t>(J_window.value_or(N / 4), 1, N);
    MaxScalar v;
    for (std::size_t j = N - width; j < N; ++j) v = oplus(v, radii[j]);
    last = v.value();
    e.schedule.push_back({N, N, last, std::nullopt});
  }
  e.lower = last;
  e.upper = certified_radius_upper(o);
  e.details["trailing_window"] = width;
  e.notes.push_back("window proxy for a limsup over j; not a certified bound");
  finalize(e, opt.tol_rel);
  return e;
}

SpectralEstimate radius_estimate(const MatrixOracle& o, const EstimateOptions& opt) {
  if (opt.K == 0) throw ValidationError("K must be at least 1");
  const auto mu = mu_estimate(o, opt);
  const auto m = m_estimate(o, std::nullopt, opt);
  SpectralEstimate e;
  e.quantity = "r";
  e.lower = std::max(mu.lower, m.lower);
  e.cycle = mu.lower >= m.lower ? mu.cycle : m.cycle;
  for (std::size_t q = 0; q < mu.schedule.size(); ++q) {
    ProbeRecord rec = mu.schedule[q];
    rec.value = std::max(rec.value, m.schedule[q].value);
    e.schedule.push_back(rec);
  }
  e.upper = certified_radius_upper(o);

  const auto t = truncate(o, opt.N);
  const auto seq = pow_norm_seq(t->sparse(), opt.K);
  // Powers longer than half the window mostly see the truncation edge.
  const std::size_t k_max = std::max<std::size_t>(1, std::min(seq.size(), opt.N / 2));
  std::size_t arg = 0;
  for (std::size_t k = 1; k < k_max; ++k)
    if (seq[k] < seq[arg]) arg = k;
  e.heuristic = seq[arg].value();
  e.details["gelfand_min"] = {{"k", arg + 1}, {"value", seq[arg].value()}};
  e.details["gelfand_at_K"] = {{"N", opt.N}, {"k", opt.K}, {"value", seq.back().value()}, {"log2", seq.back().log2()}};
  e.details["mu_lower"] = mu.lower;
  e.details["m_lower"] = m.lower;
  e.notes.push_back("window Gelfand values are heuristic: a window is not an entrywise upper bound");
  finalize(e, opt.tol_rel);
  return e;
}

SpectralEstimate c_ej_estimate(const MatrixOracle& o, std::size_t j, double t, const EstimateOptions& opt) {
  if (!(t > 0) || !std::isfinite(t)) throw ValidationError("t must be positive");
  if (j == 0 || j > opt.N) throw ValidationError("index must lie in 1..N");
  SpectralEstimate e;
  e.quantity = "c_ej";
  e.details["j"] = j;
  e.details["t"] = t;
  const double log_t = std::log(t);
  double best = 0;
  for (auto N : window_schedule(o, std::max(opt.N0, j), opt)) {
    const auto tr = truncate(o, N);
    const SparseMaxMatrix& s = tr->sparse();
    const std::size_t src = j - 1;

    // Nodes on some cycle through j: reachable from j and reaching j.
    std::vector<bool> fwd(N, false);
    {
      std::vector<std::size_t> todo{src};
      fwd[src] = true;
      while (!todo.empty()) {
        const auto v = todo.back();
        todo.pop_back();
        for (const auto& ed : s.row(v))
          if (!fwd[ed.col]) fwd[ed.col] = true, todo.push_back(ed.col);
      }
    }
    std::vector<std::size_t> nodes;
    for (auto v : ancestors(s, src))
      if (fwd[v]) nodes.push_back(v);
    const SparseMaxMatrix sub = s.principal_submatrix(nodes);
    const std::size_t root = static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), src) - nodes.begin());

    double value = 0;
    std::optional<CycleWitness> witness;
    const CycleMean cm = max_cycle_geom_mean(sub);
    if (cm.witness && cm.value.log() > log_t + 1e-12) {
      value = kInf;
      e.notes.push_back("window " + std::to_string(N) + " has a cycle with mean above t through j's class");
    } else if (cm.witness) {
      const std::size_t n = sub.dim();
      std::vector<double> dist(n, kNegInf);
      std::vector<std::size_t> pred(n, n);
      dist[root] = 0;
      for (std::size_t round = 0; round <= n; ++round) {
        bool changed = false;
        for (std::size_t u = 0; u < n; ++u) {
          if (dist[u] == kNegInf) continue;
          for (const auto& ed : sub.row(u)) {
            if (ed.col == root) continue;
            const double cand = dist[u] + ed.value.log() - log_t;
            if (cand > dist[ed.col]) {
              dist[ed.col] = cand;
              pred[ed.col] = u;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      double best_log = kNegInf;
      std::size_t last = n;
      for (std::size_t u = 0; u < n; ++u) {
        if (dist[u] == kNegInf) continue;
        const MaxScalar a = sub.at(u, root);
        if (a.is_zero()) continue;
        const double cand = dist[u] + a.log() - log_t;
        if (cand > best_log) {
          best_log = cand;
          last = u;
        }
      }
      value = std::exp(best_log);
      std::vector<std::size_t> rev{last};
      while (rev.back() != root && rev.size() <= n) rev.push_back(pred[rev.back()]);
      if (rev.back() == root) {
        std::vector<std::size_t> cyc(rev.rbegin(), rev.rend());
        if (cyc.size() > 1 && cyc.back() == cyc.front()) cyc.pop_back();
        std::vector<std::size_t> global;
        for (auto v : cyc) global.push_back(nodes[v]);
        std::rotate(global.begin(), std::min_element(global.begin(), global.end()), global.end());
        MaxScalar w = MaxScalar::one();
        for (std::size_t q = 0; q < global.size(); ++q) w *= s.at(global[q], global[(q + 1) % global.size()]);
        witness = CycleWitness{global, w.root(global.size())};
      }
    }
    if (value > best || (!e.cycle && witness && value >= best)) {
      best = value;
      e.cycle = witness ? std::optional<CycleWitness>(to_one_based(*witness)) : std::nullopt;
    }
    e.schedule.push_back({N, N, best, std::nullopt});
  }
  e.lower = best;
  finalize(e, opt.tol_rel);
  return e;
}

EigenCandidate eigenvector_construct(const MatrixOracle& o, std::size_t i0, double t, std::size_t N, std::optional<std::size_t> J) {
  if (!(t > 0) || !std::isfinite(t)) throw ValidationError("t must be positive");
  if (i0 == 0 || i0 > N) throw ValidationError("base index must lie in 1..N");
  const auto tr = truncate(o, N);
  const SparseMaxMatrix& s = tr->sparse();
  const MaxScalar ts = MaxScalar::from_linear(t);
  const MaxScalar inv = ts.inverse();
  const std::size_t depth = J.value_or(4 * N);

  EigenCandidate out;
  out.base = i0;
  out.t = t;
  out.N = N;
  MaxVector term = MaxVector::basis(N, i0 - 1);
  MaxVector x = term;
  std::size_t unchanged = 0;
  std::size_t m = 0;
  for (m = 1; m <= depth; ++m) {
    term = mat_vec(s, term);
    bool zero = true;
    for (std::size_t i = 0; i < N; ++i) {
      term[i] *= inv;
      zero = zero && term[i].is_zero();
    }
    if (zero) {
      out.stabilized = true;
      break;
    }
    MaxVector next = oplus(x, term);
    if (next == x) {
      if (++unchanged >= N) {
        out.stabilized = true;
        break;
      }
    } else {
      unchanged = 0;
      x = std::move(next);
      if (norm(x) > MaxScalar::from_linear(1e3))
        throw ResourceLimit("series norm exceeds 1e3: A/t looks power-unbounded on the window");
    }
  }
  out.depth = std::min(m, depth);
  if (o.hints().upper_bandwidth) {
    out.margin = std::min(*o.hints().upper_bandwidth, N);
    out.margin_from_hint = true;
  }
  const MaxVector y = mat_vec(s, x);
  MaxScalar worst;
  for (std::size_t i = 0; i + out.margin < N; ++i) worst = oplus(worst, abs_diff(y[i], ts * x[i]));
  out.residual = (worst / norm(x)).value();
  out.x = std::move(x);
  return out;
}

ApProbe ap_spectrum_probe(const MatrixOracle& o, double t, std::size_t N, std::size_t K) {
  if (!(t >= 0) || !std::isfinite(t)) throw ValidationError("t must be a finite nonnegative number");
  const auto tr = truncate(o, N);
  const SparseMaxMatrix& s = tr->sparse();
  const MaxScalar ts = MaxScalar::from_linear(t);

  ApProbe out;
  out.t = t;
  std::size_t extra = N;
  if (o.hints().lower_bandwidth) {
    extra = *o.hints().lower_bandwidth;
    out.certified = true;
  }
  std::vector<std::vector<SparseMaxMatrix::Entry>> outside(extra);
  for (std::size_t r = 0; r < extra; ++r)
    for (auto c : o.candidate_columns(N + r + 1, 1, N)) {
      const MaxScalar v = o.at(N + r + 1, c);
      if (!v.is_zero()) outside[r].push_back({c - 1, v});
    }
  out.rows_checked = N + extra;

  bool have = false;
  auto consider = [&](const MaxVector& x, const std::string& label) {
    const MaxScalar nx = norm(x);
    if (nx.is_zero()) return;
    const MaxVector y = mat_vec(s, x);
    MaxScalar worst;
    for (std::size_t i = 0; i < N; ++i) worst = oplus(worst, abs_diff(y[i], ts * x[i]));
    for (const auto& row : outside)
      for (const auto& e : row) worst = oplus(worst, e.value * x[e.col]);
    const double v = (worst / nx).value();
    if (!have || v < out.value) {
      have = true;
      out.value = v;
      out.candidate = label;
    }
  };

  for (std::size_t j = 1; j <= std::min<std::size_t>(32, N); ++j) {
    MaxVector x = MaxVector::basis(N, j - 1);
    consider(x, "e_" + std::to_string(j));
    for (std::size_t k = 1; k <= K; ++k) {
      x = mat_vec(s, x);
      const MaxScalar nx = norm(x);
      if (nx.is_zero()) break;
      const MaxScalar inv = nx.inverse();
      for (std::size_t i = 0; i < N; ++i) x[i] *= inv;
      consider(x, "A^" + std::to_string(k) + " e_" + std::to_string(j));
    }
  }
  if (t > 0) {
    for (std::size_t i0 = 1; i0 <= std::min<std::size_t>(8, N); ++i0) {
      try {
        const auto cand = eigenvector_construct(o, i0, t, N);
        consider(cand.x, "series from e_" + std::to_string(i0));
      } catch (const ResourceLimit&) {
        // unbounded series: no candidate
      }
    }
  }
  std::vector<double> ratios{1.0};
  if (t > 0) ratios = {t, 1.0, 1.0 / t};
  for (double sr : ratios) {
    const MaxScalar ss = MaxScalar::from_linear(sr);
    MaxVector x(N);
    MaxScalar p = MaxScalar::one();
    for (std::size_t i = 0; i < N; ++i) {
      x[i] = p * MaxScalar::from_linear(1.0 - static_cast<double>(i) / static_cast<double>(N));
      p *= ss;
    }
    consider(x, "ramp s=" + std::to_string(sr));
  }
  return out;
}

PowerBoundReport power_bound_check(const MatrixOracle& o, std::size_t N, std::size_t K) {
  if (K == 0) throw ValidationError("K must be at least 1");
  PowerBoundReport out;
  out.N = N;
  out.norms = pow_norms(truncate(o, N)->sparse(), K);
  for (const auto& v : out.norms) out.sup = oplus(out.sup, v);
  out.threshold = 1e3 * std::max(1.0, o.norm_bound());
  out.bounded = out.sup <= MaxScalar::from_linear(out.threshold);
  return out;
}

IrreducibilityReport irreducibility_check(const MatrixOracle& o, std::size_t N) {
  IrreducibilityReport out;
  out.N = N;
  out.classes = strong_components(truncate(o, N)->sparse()).classes.size();
  out.window_irreducible = out.classes == 1;
  out.oracle_irreducible = o.hints().irreducible;
  return out;
}

}  // namespace maxspec
