// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "maxspec/blockform.hpp"
#include "maxspec/continuity.hpp"
#include "maxspec/estimators.hpp"
#include "maxspec/finite_spectral.hpp"
#include "maxspec/gallery.hpp"
#include "maxspec/oracle.hpp"
#include "oracles.hpp"

using namespace maxspec;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// Every mu / m / local-radius estimate produced here, for criterion 10.
struct ScheduleLog {
  std::size_t runs = 0, records = 0, violations = 0;
  std::string first;

  const SpectralEstimate& operator()(const SpectralEstimate& e) {
    ++runs;
    records += e.schedule.size();
    for (std::size_t i = 1; i < e.schedule.size(); ++i)
      if (e.schedule[i].value < e.schedule[i - 1].value || e.schedule[i].N < e.schedule[i - 1].N) {
        if (violations++ == 0) first = e.quantity + " at N=" + std::to_string(e.schedule[i].N);
      }
    return e;
  }
} schedule_log;

EstimateOptions opts(std::size_t N, std::size_t K = 64) {
  EstimateOptions o;
  o.N = N;
  o.K = K;
  return o;
}

void criterion1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::size_t bad = 0;
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 8;
    const auto d = oracle::random_dense(rng, n, 0.5);
    const MaxScalar karp = max_cycle_geom_mean(FiniteMaxMatrix::from_rows(d)).value;
    const double brute = oracle::brute_cycle_mean_log(d);
    if (brute == oracle::kNegInf || karp.is_zero()) {
      if (!(brute == oracle::kNegInf && karp.is_zero())) ++bad;
      continue;
    }
    const double err = std::abs(karp.log() - brute);
    worst = std::max(worst, err);
    if (err > 1e-12) ++bad;
  }
  const double s = seconds_since(t0);
  report(1, bad == 0 && s < 10,
         fmt("Karp = brute-force cycle maximum on 1000 random matrices (n <= 8): %zu mismatches, max log error %.2e (tol 1e-12), %.2f s (< 10 s)",
             bad, worst, s));
}

void criterion2() {
  std::mt19937_64 rng(1002);
  std::size_t off_power = 0, off_exact = 0, checked = 0;
  double worst = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + t % 10;
    const auto d = oracle::random_dense(rng, n, 0.3);
    const auto a = FiniteMaxMatrix::from_rows(d);
    for (std::size_t j = 0; j < n; ++j) {
      ++checked;
      const MaxScalar acc = access_radius(a, j).value;
      if (!(acc == local_radius_finite(a, j))) ++off_exact;
      const double p = oracle::local_radius_power(d, j);
      const double err = std::abs(acc.value() - p) / std::max(1.0, p);
      worst = std::max(worst, err);
      if (err > 1e-6) ++off_power;
    }
  }
  report(2, off_power == 0 && off_exact == 0,
         fmt("access radius on 500 random matrices (n <= 10, %zu indices): %zu off the power-iteration value (max rel error %.2e, tol 1e-6), "
             "%zu not bit-identical to local_radius_finite",
             checked, off_power, worst, off_exact));
}

void criterion3() {
  std::mt19937_64 rng(1003);
  std::size_t bad = 0;
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 6;
    const auto d = oracle::random_dense(rng, n, 0.4);
    const auto a = FiniteMaxMatrix::from_rows(d);
    const MaxVector chi = cycle_time_vector(a.transpose());
    for (std::size_t j = 0; j < n; ++j) {
      const MaxScalar r = local_radius_finite(a, j);
      const double err = (chi[j].is_zero() || r.is_zero()) ? (chi[j] == r ? 0.0 : 1.0) : std::abs(chi[j].log() - r.log());
      worst = std::max(worst, err);
      if (err > 1e-9) ++bad;
    }
  }
  report(3, bad == 0, fmt("cycle time of A^T = local radii of A on 200 random matrices (n <= 6): %zu mismatches, max error %.2e (tol 1e-9)", bad, worst));
}

void criterion4() {
  const auto t0 = Clock::now();
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  };

  {
    const auto g = gallery("backward_shift");
    const auto& mu = schedule_log(mu_estimate(*g.oracle, opts(1024)));
    expect(mu.lower == 0 && mu.upper && *mu.upper == 0, "backward_shift mu = 0 exact");
    auto r = radius_estimate(*g.oracle, opts(1024));
    attach_known(r, g, "r");
    expect(r.known && r.known->value == 1.0, "backward_shift r known 1");
    const auto rp = r_prime_estimate(*g.oracle, opts(2048, 1024));
    expect(rp.lower >= 0.999, fmt("backward_shift r' lower %.6f >= 0.999 at k = 1024", rp.lower));
  }
  {
    const auto mu = schedule_log(mu_estimate(*gallery("diag_ratio").oracle, opts(1024)));
    expect(mu.lower >= 0.999, fmt("diag_ratio mu lower %.6f >= 0.999 at N = 1024", mu.lower));
  }
  {
    const auto o = gallery("diag_inverse").oracle;
    bool exact = true;
    for (std::size_t j = 1; j <= 64; ++j) {
      const auto& e = schedule_log(local_radius_estimate(*o, j, opts(64)));
      for (const auto& rec : e.schedule)
        if (rec.N >= j && std::abs(rec.value - 1.0 / double(j)) > 1e-15 / double(j)) exact = false;
    }
    expect(exact, "diag_inverse r_{e_j} = 1/j at every N >= j");
    const auto mu = schedule_log(mu_estimate(*o, opts(1024)));
    expect(mu.lower >= 0.999, "diag_inverse mu lower >= 0.999");
  }
  {
    const auto o = gallery("star_means").oracle;
    const auto mu = schedule_log(mu_estimate(*o, opts(1024)));
    expect(std::abs(mu.lower - 1023.0 / 1024) <= 1e-15, fmt("star_means mu lower %.16f = 1023/1024", mu.lower));
    const auto re = r_ess_estimate(*o, {1}, opts(1024));
    expect(re.lower == 0 && re.upper && *re.upper == 0 && re.schedule.size() == 1 && re.schedule[0].value == 0,
           "star_means r_ess = 0 exact via the zero tail window");
  }
  {
    const auto g = gallery("epsilon_cycle", {{"eps", 0.5}});
    for (std::size_t N : {4, 8, 64, 512}) {
      const auto mu = schedule_log(mu_estimate(*g.oracle, opts(N)));
      expect(std::abs(mu.lower - 0.5) <= 1e-15, fmt("epsilon_cycle mu lower = 1/2 at N = %zu", N));
    }
    auto r = radius_estimate(*g.oracle, opts(512));
    attach_known(r, g, "r");
    expect(r.known && r.known->value == 1.0, "epsilon_cycle r known 1");
    auto re = r_ess_estimate(*g.oracle, {1, 2, 4, 8}, opts(512));
    attach_known(re, g, "r_ess");
    expect(!re.converged && re.known && re.known->value == 1.0, "epsilon_cycle r_ess flagged non-converged with known 1");
  }
  {
    const auto g = gallery("forward_shift");
    const auto mu = schedule_log(mu_estimate(*g.oracle, opts(1024)));
    expect(mu.lower == 0 && mu.upper && *mu.upper == 0, "forward_shift mu = 0 exact");
    const auto rp = r_prime_estimate(*g.oracle, opts(2048, 1024));
    expect(rp.lower >= 0.999, fmt("forward_shift r' lower %.6f >= 0.999", rp.lower));
    auto m = schedule_log(m_estimate(*g.oracle, std::nullopt, opts(512)));
    attach_known(m, g, "m");
    expect(!m.converged && m.known && m.known->value == 1.0, "forward_shift m flagged non-converged with known 1");
  }
  const double s = seconds_since(t0);
  std::string what = fmt("gallery values reproduced, %.2f s (< 60 s)", s);
  if (!failed.empty()) what += "; failed: " + failed.front() + (failed.size() > 1 ? fmt(" (+%zu more)", failed.size() - 1) : "");
  report(4, failed.empty() && s < 60, what);
}

void criterion5() {
  const auto t0 = Clock::now();
  const auto rep = kakutani_experiment(10);
  bool cut = rep.cutoffs.size() == 10;
  for (const auto& c : rep.cutoffs)
    cut = cut && c.power_vanishes && c.nilpotency_index <= (std::size_t{1} << (c.m + 1)) && c.distance == std::ldexp(1.0, -int(c.m));
  const double target = std::exp2(-0.99902);
  const bool gelfand = rep.gelfand_k == 1024 && rep.gelfand_N == 2048 && std::abs(rep.gelfand - target) <= 1e-3;
  const bool gap = std::abs(rep.gap - 0.5) <= 1e-3;
  const double s = seconds_since(t0);
  report(5, cut && gelfand && gap && s < 30,
         fmt("Kakutani: cutoffs m <= 10 nilpotent with ||A - A_m|| = 2^-m: %s; window Gelfand %.6f vs %.6f (tol 1e-3); gap %.6f vs 0.5 "
             "(tol 1e-3); %.2f s (< 30 s)",
             cut ? "yes" : "no", rep.gelfand, target, rep.gap, s));
}

void criterion6() {
  const auto star = eigenvector_construct(*gallery("star_means").oracle, 1, 1.0, 512);
  const auto fwd = gallery("forward_shift").oracle;
  double fmin = 1e300;
  for (std::size_t N = 1; N <= 512; ++N) fmin = std::min(fmin, eigenvector_construct(*fwd, 1, 1.0, N).residual);
  report(6, star.residual <= 2.0 / 512 && fmin >= 0.5,
         fmt("eigenvector series: star_means residual %.6e <= 2/512; forward_shift min residual over N <= 512 is %.3f >= 0.5", star.residual,
             fmin));
}

void criterion7() {
  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<std::size_t> kd(1, 32), nd(1, 6);
  std::uniform_real_distribution<double> u(0, 1);
  std::size_t violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = nd(rng);
    const auto a = FiniteMaxMatrix::from_rows(oracle::random_dense(rng, n, u(rng)));
    FiniteMaxMatrix b = a;
    // Half the pairs are small perturbations of each other, half independent.
    if (t % 2) {
      b = FiniteMaxMatrix::from_rows(oracle::random_dense(rng, n, u(rng)));
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (u(rng) < 0.3) b(i, j) = MaxScalar::from_linear(a(i, j).value() + u(rng) * 0.01);
    }
    if (!lipschitz_power_bound_check(a, b, kd(rng)).ok()) ++violations;
  }
  report(7, violations == 0, fmt("Lipschitz power bound on 10000 random (A, B, k <= 32) triples: %zu violations", violations));
}

void criterion8() {
  const auto rep = holder_experiment(1.0, {2, 4, 8});
  std::ostringstream rows;
  bool ok = rep.rows.size() == 3;
  for (const auto& r : rep.rows) {
    ok = ok && r.ratio > double(r.k) / 2 && holder_inequality(1.0, r.k, r.n_k) && (r.n_k == 1 || !holder_inequality(1.0, r.k, r.n_k - 1));
    rows << " k=" << r.k << " n_k=" << r.n_k << " ratio=" << r.ratio << " (> " << double(r.k) / 2 << ")";
  }
  report(8, ok, "Holder counterexample, alpha = 1:" + rows.str());
}

void criterion9() {
  std::mt19937_64 rng(1009);
  std::size_t bad = 0;
  double worst_r = -1e300, worst_mu = -1e300;
  for (int t = 0; t < 200; ++t) {
    const auto a = FiniteMaxMatrix::from_rows(oracle::random_dense(rng, 1 + t % 8, 0.5));
    const auto rep = semicontinuity_scan("random", a, geometric_perturbation(a, 5000 + t), 40);
    if (!rep.ok()) ++bad;
    worst_r = std::max(worst_r, rep.limsup_r - rep.r_target);
    worst_mu = std::max(worst_mu, rep.mu_target - rep.liminf_mu);
  }
  const std::vector<std::size_t> ks{2, 3, 4, 5, 8, 16, 32, 64, 128, 256, 512};
  const auto bump = mu_bump_scan(ks);
  bool exact = bump.mu.size() == ks.size();
  for (std::size_t i = 0; exact && i < ks.size(); ++i) {
    const double k = double(ks[i]);
    exact = std::abs(bump.mu[i] - std::pow(k, -1 / k)) <= 1e-12 * std::pow(k, -1 / k);
  }
  report(9, bad == 0 && exact,
         fmt("semicontinuity on 200 convergent sequences: %zu failures, max limsup r - r = %.2e, max mu - liminf mu = %.2e (tol 1e-9); "
             "mu(B_k) = k^(-1/k) for %zu values of k: %s",
             bad, worst_r, worst_mu, ks.size(), exact ? "yes" : "no"));
}

void criterion10() {
  for (const auto& info : gallery_list()) {
    nlohmann::json params = nlohmann::json::object();
    if (info.name == "epsilon_cycle") params = {{"eps", 0.5}};
    if (info.name == "kakutani_cutoff") params = {{"m", 4}};
    if (info.name == "holder_family") params = {{"alpha", 1}, {"k", 4}};
    if (info.name == "shift_perturbed") params = {{"n", 8}, {"eps", 0.5}, {"eps_prime", 0.25}};
    if (info.name == "diag_const") params = {{"c", 2}};
    if (info.name == "forward_shift_bump") params = {{"k", 20}};
    const auto o = gallery(info.name, params).oracle;
    const auto opt = opts(512, 32);
    schedule_log(mu_estimate(*o, opt));
    schedule_log(m_estimate(*o, std::nullopt, opt));
    for (std::size_t j : {1, 2, 3, 10, 33}) schedule_log(local_radius_estimate(*o, j, opt));
  }
  report(10, schedule_log.violations == 0 && schedule_log.runs > 0,
         fmt("monotone lower-bound schedules: %zu mu/m/local-radius runs, %zu records, %zu violations%s", schedule_log.runs,
             schedule_log.records, schedule_log.violations, schedule_log.violations ? (" (first: " + schedule_log.first + ")").c_str() : ""));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                    criterion6, criterion7, criterion8, criterion9, criterion10};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
