#include "maxspec/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "maxspec/errors.hpp"
#include "maxspec/finite_spectral.hpp"
#include "maxspec/gallery.hpp"
#include "maxspec/io.hpp"
#include "maxspec/oracle.hpp"

namespace maxspec {

namespace {

constexpr double kRelTol = 1e-12;

Inequality leq(std::string name, MaxScalar lhs, MaxScalar rhs) {
  return {std::move(name), lhs.value(), rhs.value(), lhs <= rhs * MaxScalar::from_linear(1 + kRelTol)};
}

Inequality leq(std::string name, double lhs, double rhs, double abs_tol) {
  return {std::move(name), lhs, rhs, lhs <= rhs + std::abs(rhs) * kRelTol + abs_tol};
}

void check_same_dim(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("matrices must have equal dimensions");
  if (a.dim() == 0) throw ValidationError("matrices must be nonempty");
}

MaxScalar sparse_distance(const SparseMaxMatrix& a, const SparseMaxMatrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("matrices must have equal dimensions");
  MaxScalar d;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const auto ra = a.row(i);
    const auto rb = b.row(i);
    std::size_t p = 0, q = 0;
    while (p < ra.size() || q < rb.size()) {
      if (q == rb.size() || (p < ra.size() && ra[p].col < rb[q].col)) {
        d = oplus(d, ra[p++].value);
      } else if (p == ra.size() || rb[q].col < ra[p].col) {
        d = oplus(d, rb[q++].value);
      } else {
        d = oplus(d, abs_diff(ra[p++].value, rb[q++].value));
      }
    }
  }
  return d;
}

double tail_max(const std::vector<double>& v) {
  const std::size_t from = v.size() - std::max<std::size_t>(1, (v.size() + 3) / 4);
  return *std::max_element(v.begin() + static_cast<long>(from), v.end());
}

double tail_min(const std::vector<double>& v) {
  const std::size_t from = v.size() - std::max<std::size_t>(1, (v.size() + 3) / 4);
  return *std::min_element(v.begin() + static_cast<long>(from), v.end());
}

}  // namespace

bool PerturbationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Inequality& c) { return c.holds; });
}

PerturbationReport lipschitz_power_bound_check(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b, std::size_t k) {
  check_same_dim(a, b);
  if (k == 0) throw ValidationError("k must be at least 1");
  PerturbationReport out;
  out.op = "lipschitz";
  out.inputs = {{"op", "lipschitz"}, {"A", matrix_to_json(a)}, {"B", matrix_to_json(b)}, {"k", k}};
  out.k = k;
  const MaxScalar d = distance(a, b);
  const MaxScalar na = norm(a), nb = norm(b);
  out.distance = d.value();
  out.norm_base = na.value();
  out.norm_perturbed = nb.value();
  const MaxScalar lhs = distance(power(a, k), power(b, k));
  const MaxScalar rhs = MaxScalar::from_linear(static_cast<double>(k)) * d * oplus(na, nb).pow(k - 1);
  out.checks.push_back(leq("||A^k - B^k|| <= k ||A-B|| max(||A||,||B||)^(k-1)", lhs, rhs));
  out.details["lhs_log2"] = lhs.is_zero() ? nlohmann::json(nullptr) : nlohmann::json(lhs.log2());
  out.details["rhs_log2"] = rhs.is_zero() ? nlohmann::json(nullptr) : nlohmann::json(rhs.log2());
  return out;
}

PerturbationReport weaker_holder_bound_check(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b, double eps) {
  check_same_dim(a, b);
  const CycleMean ma = max_cycle_geom_mean(a);
  const CycleMean mb = max_cycle_geom_mean(b);
  const double mu_a = ma.value.value();
  const double mu_b = mb.value.value();
  if (!(eps > 0)) throw ValidationError("eps must be positive");
  if (!(mu_b > eps)) throw ValidationError("requires mu(B) > eps");
  if (!(mu_a > 0)) throw ValidationError("requires mu(A) > 0");

  PerturbationReport out;
  out.op = "weaker";
  out.inputs = {{"op", "weaker"}, {"A", matrix_to_json(a)}, {"B", matrix_to_json(b)}, {"eps", eps}};
  const double d = distance(a, b).value();
  const double M = std::max(norm(a).value(), norm(b).value());
  out.distance = d;
  out.norm_base = norm(a).value();
  out.norm_perturbed = norm(b).value();
  out.mu_base = mu_a;
  out.mu_perturbed = mu_b;

  auto term = [&](std::size_t k) {
    const double kk = static_cast<double>(k);
    return std::pow(kk, 1 / kk) * std::pow(d, 1 / kk) * std::pow(M, (kk - 1) / kk);
  };

  // Cycle of B with mean >= mu(B) - eps: its critical cycle.
  const auto& cb = *mb.witness;
  const std::size_t k = cb.length();
  out.k = k;
  const auto path = cb.closed_path();
  const double b_cycle = path_weight(b, path).weight.value();
  const double a_cycle = path_weight(a, path).weight.value();
  const double kk = static_cast<double>(k);
  out.checks.push_back(leq("(mu(B)-eps)^k <= B(cycle)", std::pow(mu_b - eps, kk), b_cycle, 0));
  out.checks.push_back(leq("B(cycle) <= A(cycle) + k ||A-B|| max(||A||,||B||)^(k-1)", b_cycle,
                           a_cycle + kk * d * std::pow(M, kk - 1), 0));
  out.checks.push_back(leq("mu(B) - eps <= mu(A) + k^(1/k) ||A-B||^(1/k) max(||A||,||B||)^((k-1)/k)", mu_b - eps,
                           mu_a + term(k), 0));

  const std::size_t k2 = ma.witness->length();
  out.details["k_mirror"] = k2;
  out.details["cycle_B"] = cb.nodes;
  out.details["cycle_A"] = ma.witness->nodes;
  out.checks.push_back(leq("mu(A) - k^(1/k) ||A-B||^(1/k) max(||A||,||B||)^((k-1)/k) <= mu(B) + eps",
                           mu_a - term(k2), mu_b + eps, 0));
  return out;
}

PerturbationReport replay(const PerturbationReport& r) {
  const auto& in = r.inputs;
  const std::string op = in.at("op");
  const FiniteMaxMatrix a = matrix_from_json(in.at("A"));
  const FiniteMaxMatrix b = matrix_from_json(in.at("B"));
  if (op == "lipschitz") return lipschitz_power_bound_check(a, b, in.at("k").get<std::size_t>());
  if (op == "weaker") return weaker_holder_bound_check(a, b, in.at("eps").get<double>());
  throw ValidationError("unknown report op '" + op + "'");
}

double kakutani_product_formula(std::size_t m) {
  if (m == 0) return 1;
  double e = 0;
  for (std::size_t j = 1; j < m; ++j) e += static_cast<double>(j) * std::ldexp(1.0, -static_cast<int>(j) - 1);
  e += static_cast<double>(m) * std::ldexp(1.0, -static_cast<int>(m));
  return std::exp2(-e);
}

bool KakutaniReport::ok() const {
  for (const auto& c : cutoffs)
    if (!c.power_vanishes || !c.distance_exact) return false;
  return std::abs(gelfand - closed_form) <= 1e-3 && std::abs(gap - r_known) <= 1e-3;
}

KakutaniReport kakutani_experiment(std::size_t m_max) {
  if (m_max == 0) throw ValidationError("m_max must be at least 1");
  if (m_max > 12) throw ResourceLimit("m_max is limited to 12");
  KakutaniReport out;
  out.m_max = m_max;
  const auto full = gallery("kakutani");
  for (std::size_t m = 1; m <= m_max; ++m) {
    const auto cut = gallery("kakutani_cutoff", {{"m", m}});
    KakutaniCutoff row;
    row.m = m;
    // The zero pattern of A_m repeats with period 2^m, so four periods
    // contain every path of length <= 2^(m+1) up to translation.
    const std::size_t period = std::size_t{1} << m;
    row.window = 4 * period;
    const auto tc = truncate(*cut.oracle, row.window);
    const auto norms = pow_norms(tc->sparse(), 2 * period);
    for (std::size_t p = 0; p < norms.size(); ++p)
      if (norms[p].is_zero()) {
        row.nilpotency_index = p + 1;
        break;
      }
    row.power_vanishes = norms.back().is_zero();
    const MaxScalar d = sparse_distance(truncate(*full.oracle, row.window)->sparse(), tc->sparse());
    row.distance = d.value();
    row.distance_exact = d == MaxScalar::exp2i(-static_cast<std::int64_t>(m));
    out.cutoffs.push_back(row);
  }
  out.gelfand_k = std::size_t{1} << m_max;
  out.gelfand_N = 2 * out.gelfand_k;
  const auto seq = pow_norm_seq(truncate(*full.oracle, out.gelfand_N)->sparse(), out.gelfand_k);
  for (std::size_t j = 0; j <= m_max; ++j) {
    const std::size_t k = std::size_t{1} << j;
    out.series.emplace_back(k, seq[k - 1].value());
  }
  out.gelfand = seq.back().value();
  out.closed_form = kakutani_product_formula(m_max);
  out.gap = out.gelfand - 0.0;
  return out;
}

bool HolderReport::ok() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const HolderRow& r) { return r.holds; });
}

HolderReport holder_experiment(double alpha, const std::vector<std::size_t>& k_list) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
  HolderReport out;
  out.alpha = alpha;
  const auto base = gallery("holder_family", {{"alpha", alpha}, {"k", 0}});
  const auto& layout = *base.layout;
  for (auto k : k_list) {
    if (k < 2) throw ValidationError("k must be at least 2");
    const auto bk = gallery("holder_family", {{"alpha", alpha}, {"k", k}});
    HolderRow row;
    row.k = k;
    row.n_k = holder_block_size(alpha, k);
    const auto last = layout.index_of(k, row.n_k);
    if (!last) throw ResourceLimit("block " + std::to_string(k) + " lies beyond the enumerated prefix");
    row.window = *last;
    const auto ta = truncate(*base.oracle, row.window);
    const auto tb = truncate(*bk.oracle, row.window);
    row.distance = sparse_distance(ta->sparse(), tb->sparse()).value();
    row.r_cycle = holder_block_mean(alpha, k, k);
    row.r_window = max_cycle_geom_mean(tb->sparse()).value.value();
    const double r_lower = std::max(row.r_cycle, row.r_window);
    row.ratio = (r_lower - out.r_base) / std::pow(row.distance, alpha);
    row.bound = static_cast<double>(k) / 2;
    row.holds = row.ratio > row.bound;
    out.rows.push_back(row);
  }
  return out;
}

bool LipschitzCounterexample::ok() const {
  const double tol = 1e-12;
  return r_b == 0 && std::abs(r_c - r_c_closed) <= tol * std::max(1.0, r_c_closed) &&
         std::abs(dist_bc - eps_prime) <= tol && std::abs(dist_ab - eps) <= tol && std::abs(dist_ac - eps) <= tol;
}

LipschitzCounterexample lipschitz_counterexample(double eps, double eps_prime, std::size_t n) {
  if (!(eps_prime > 0 && eps_prime < eps) || !std::isfinite(eps)) throw ValidationError("requires 0 < eps' < eps");
  if (n < 2) throw ValidationError("n must be at least 2");
  LipschitzCounterexample out;
  out.eps = eps;
  out.eps_prime = eps_prime;
  out.n = n;
  auto ratio_for = [&](std::size_t nn, bool fill) {
    const auto b = gallery("shift_perturbed", {{"n", nn}, {"eps", eps}, {"eps_prime", 0.0}});
    const auto c = gallery("shift_perturbed", {{"n", nn}, {"eps", eps}, {"eps_prime", eps_prime}});
    // Both are supported on the leading n x n block.
    const auto tb = truncate(*b.oracle, nn);
    const auto tc = truncate(*c.oracle, nn);
    const double rb = max_cycle_geom_mean(tb->sparse()).value.value();
    const double rc = max_cycle_geom_mean(tc->sparse()).value.value();
    const double dbc = sparse_distance(tb->sparse(), tc->sparse()).value();
    if (fill) {
      const SparseMaxMatrix zero(nn, {});
      out.r_b = rb;
      out.r_c = rc;
      out.r_c_closed = std::pow(std::pow(eps, static_cast<double>(nn - 1)) * eps_prime, 1.0 / static_cast<double>(nn));
      out.dist_ab = sparse_distance(zero, tb->sparse()).value();
      out.dist_ac = sparse_distance(zero, tc->sparse()).value();
      out.dist_bc = dbc;
    }
    return std::abs(rb - rc) / dbc;
  };
  for (std::size_t nn = 2; nn <= n; ++nn) out.series.emplace_back(nn, ratio_for(nn, nn == n));
  out.ratio = out.series.back().second;
  return out;
}

SemicontinuityReport semicontinuity_scan(const std::string& name, const FiniteMaxMatrix& target, const SequenceGenerator& gen,
                                         std::size_t count, double tol) {
  if (count < 2) throw ValidationError("need at least two terms");
  SemicontinuityReport out;
  out.name = name;
  out.tol = tol;
  out.r_target = radius_finite(target).value();
  out.mu_target = out.r_target;
  std::vector<MaxScalar> dist;
  for (std::size_t n = 1; n <= count; ++n) {
    const FiniteMaxMatrix an = gen(n);
    if (an.dim() != target.dim()) throw ValidationError("sequence term has the wrong dimension");
    const MaxScalar d = distance(an, target);
    if (!dist.empty() && d > dist.back()) throw ValidationError("sequence is not converging: distance increased at term " + std::to_string(n));
    dist.push_back(d);
    out.distances.push_back(d.value());
    const double r = radius_finite(an).value();
    out.r.push_back(r);
    out.mu.push_back(r);
  }
  if (!dist.front().is_zero() && !(dist.back() < dist.front()))
    throw ValidationError("sequence is not converging: distance does not decrease");
  out.limsup_r = tail_max(out.r);
  out.liminf_mu = tail_min(out.mu);
  out.r_upper = out.limsup_r <= out.r_target + tol;
  out.mu_lower = out.liminf_mu >= out.mu_target - tol;
  out.r_strict = out.limsup_r < out.r_target - tol;
  out.mu_strict = out.liminf_mu > out.mu_target + tol;
  out.notes.push_back("finite matrices: r = mu, both evaluated exactly by Karp");
  return out;
}

SequenceGenerator single_entry_bump(const FiniteMaxMatrix& a, std::size_t i, std::size_t j) {
  if (i >= a.dim() || j >= a.dim()) throw ValidationError("bump entry out of range");
  return [a, i, j](std::size_t n) {
    FiniteMaxMatrix b = a;
    const double v = a(i, j).value() + 1.0 / static_cast<double>(n);
    b(i, j) = MaxScalar::from_linear(v);
    return b;
  };
}

SequenceGenerator geometric_perturbation(const FiniteMaxMatrix& a, std::uint64_t seed) {
  const std::size_t n = a.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sign(-1.0, 1.0);
  std::uniform_real_distribution<double> coef(0.5, 2.0);
  std::bernoulli_distribution pick(0.3);
  std::vector<double> s(n * n), c(n * n, 0.0);
  for (std::size_t p = 0; p < n * n; ++p) {
    s[p] = sign(rng);
    if (a(p / n, p % n).is_zero() && pick(rng)) c[p] = coef(rng);
  }
  return [a, s, c, n](std::size_t t) {
    FiniteMaxMatrix b = a;
    const double rel = std::ldexp(1.0, -static_cast<int>(t) - 12);
    const std::int64_t tiny = -(std::int64_t{1} << std::min<std::size_t>(t, 62));
    for (std::size_t p = 0; p < n * n; ++p) {
      MaxScalar& e = b(p / n, p % n);
      if (!e.is_zero()) e *= MaxScalar::from_linear(1 + s[p] * rel);
      else if (c[p] > 0) e = MaxScalar::from_linear(c[p]) * MaxScalar::exp2i(tiny);
    }
    return b;
  };
}

SemicontinuityReport kakutani_scan(std::size_t m_max) {
  const auto rep = kakutani_experiment(m_max);
  SemicontinuityReport out;
  out.name = "kakutani_cutoffs";
  out.r_target = 0.5;
  out.mu_target = 0;
  for (const auto& c : rep.cutoffs) {
    out.distances.push_back(c.distance);
    // Nilpotent, so r(A_m) = mu(A_m) = 0 exactly.
    out.r.push_back(c.power_vanishes ? 0.0 : std::nan(""));
    out.mu.push_back(0);
  }
  out.limsup_r = tail_max(out.r);
  out.liminf_mu = tail_min(out.mu);
  out.r_upper = out.limsup_r <= out.r_target + out.tol;
  out.mu_lower = out.liminf_mu >= out.mu_target - out.tol;
  out.r_strict = out.limsup_r < out.r_target - out.tol;
  out.mu_strict = out.liminf_mu > out.mu_target + out.tol;
  out.notes.push_back("r(A) = 1/2 from the product formula; window Gelfand value " + std::to_string(rep.gelfand));
  out.notes.push_back("strict inequality: limsup r(A_m) = 0 < 1/2 = r(A)");
  return out;
}

SemicontinuityReport mu_bump_scan(const std::vector<std::size_t>& k_list) {
  if (k_list.empty()) throw ValidationError("k list is empty");
  SemicontinuityReport out;
  out.name = "forward_shift_bump";
  out.r_target = 1;
  out.mu_target = 0;
  for (std::size_t q = 0; q < k_list.size(); ++q) {
    const std::size_t k = k_list[q];
    if (q > 0 && k <= k_list[q - 1]) throw ValidationError("k list must be increasing");
    const auto g = gallery("forward_shift_bump", {{"k", k}});
    // The only cycle 1 -> k -> ... -> 1 lives in the leading k-window.
    const CycleMean cm = max_cycle_geom_mean(truncate(*g.oracle, k)->sparse());
    const double closed = std::pow(static_cast<double>(k), -1.0 / static_cast<double>(k));
    out.distances.push_back(1.0 / static_cast<double>(k));
    out.mu.push_back(cm.value.value());
    out.r.push_back(1);
    if (std::abs(cm.value.value() - closed) > 1e-12 * closed)
      out.notes.push_back("mu(B_" + std::to_string(k) + ") differs from k^(-1/k)");
  }
  out.limsup_r = tail_max(out.r);
  out.liminf_mu = tail_min(out.mu);
  out.r_upper = out.limsup_r <= out.r_target + out.tol;
  out.mu_lower = out.liminf_mu >= out.mu_target - out.tol;
  out.r_strict = out.limsup_r < out.r_target - out.tol;
  out.mu_strict = out.liminf_mu > out.mu_target + out.tol;
  out.notes.push_back("r(B_k) = 1: B_k contains the forward shift and ||B_k|| = 1");
  out.notes.push_back("strict inequality: liminf mu(B_k) = 1 > 0 = mu(A)");
  return out;
}

}  // namespace maxspec
