#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <set>

#include "maxspec/errors.hpp"
#include "maxspec/estimators.hpp"
#include "maxspec/finite_spectral.hpp"
#include "maxspec/gallery.hpp"
#include "maxspec/oracle.hpp"
#include "maxspec/report.hpp"
#include "oracles.hpp"

using namespace maxspec;
using nlohmann::json;

namespace {

EstimateOptions opts(std::size_t N, std::size_t K = 64) {
  EstimateOptions o;
  o.N = N;
  o.K = K;
  return o;
}

void check_monotone(const SpectralEstimate& e) {
  for (std::size_t i = 1; i < e.schedule.size(); ++i) {
    CHECK(e.schedule[i].N >= e.schedule[i - 1].N);
    CHECK_MESSAGE(e.schedule[i].value >= e.schedule[i - 1].value, e.quantity << " at N=" << e.schedule[i].N);
  }
  if (!e.schedule.empty()) CHECK(e.schedule.back().value == e.lower);
}

void check_bracket(const SpectralEstimate& e) {
  if (e.upper) CHECK(e.lower <= *e.upper);
}

/// Geometric mean of a 1-based witness cycle recomputed from oracle probes.
double witness_mean(const MatrixOracle& o, const CycleWitness& w) {
  double lw = 0;
  const auto& c = w.nodes;
  for (std::size_t p = 0; p < c.size(); ++p) lw += std::log(o.entry(c[p], c[(p + 1) % c.size()]));
  return std::exp(lw / static_cast<double>(c.size()));
}

struct ThreadsGuard {
  std::string saved;
  bool had;
  explicit ThreadsGuard(const char* v) {
    const char* old = std::getenv("MAXSPEC_THREADS");
    had = old != nullptr;
    if (had) saved = old;
    setenv("MAXSPEC_THREADS", v, 1);
  }
  ~ThreadsGuard() {
    if (had) setenv("MAXSPEC_THREADS", saved.c_str(), 1);
    else unsetenv("MAXSPEC_THREADS");
  }
};

}  // namespace

TEST_SUITE("schedules") {
  TEST_CASE("doubling schedule") {
    CHECK(doubling_schedule(16, 100) == std::vector<std::size_t>{16, 32, 64, 100});
    CHECK(doubling_schedule(16, 64) == std::vector<std::size_t>{16, 32, 64});
    CHECK(doubling_schedule(16, 5) == std::vector<std::size_t>{5});
    CHECK(default_tail_schedule(64) == std::vector<std::size_t>{1, 2, 4, 8, 16, 32});
  }

  TEST_CASE("stabilization rule") {
    std::vector<ProbeRecord> s{{16, 8, 0.5, {}}, {32, 8, 0.9, {}}, {64, 8, 0.9, {}}};
    CHECK(!stabilized(s, 1e-6));
    s.push_back({128, 8, 0.9, {}});
    CHECK(stabilized(s, 1e-6));
    s.push_back({256, 8, 0.91, {}});
    CHECK(!stabilized(s, 1e-6));
  }
}

TEST_SUITE("mu") {
  TEST_CASE("star_means") {
    const auto g = gallery("star_means");
    auto e = mu_estimate(*g.oracle, opts(64));
    CHECK(e.lower == doctest::Approx(63.0 / 64).epsilon(1e-14));
    REQUIRE(e.cycle);
    CHECK(e.cycle->length() == 2);
    CHECK(e.cycle->nodes[0] == 1);
    CHECK(e.cycle->nodes[1] == 64);
    CHECK(witness_mean(*g.oracle, *e.cycle) == doctest::Approx(e.lower).epsilon(1e-14));
    REQUIRE(e.upper);
    CHECK(*e.upper == 1);
    attach_known(e, g, "mu");
    REQUIRE(e.known);
    CHECK(e.known->value == 1.0);
    CHECK(!e.converged);
    check_monotone(e);
    for (const auto& rec : e.schedule) CHECK(rec.value == doctest::Approx(double(rec.N - 1) / rec.N).epsilon(1e-14));
  }

  TEST_CASE("backward_shift is exactly 0") {
    const auto e = mu_estimate(*gallery("backward_shift").oracle, opts(256));
    CHECK(e.lower == 0);
    REQUIRE(e.upper);
    CHECK(*e.upper == 0);
    CHECK(e.converged);
    CHECK(!e.cycle);
  }

  TEST_CASE("diag_ratio approaches 1 without attaining it") {
    const auto e = mu_estimate(*gallery("diag_ratio").oracle, opts(1024));
    CHECK(e.lower == doctest::Approx(1024.0 / 1025).epsilon(1e-14));
    CHECK(e.lower >= 0.999);
    CHECK(e.lower < 1);
    check_monotone(e);
  }

  TEST_CASE("epsilon_cycle(1/2) is exact at N >= 4") {
    const auto g = gallery("epsilon_cycle", {{"eps", 0.5}});
    for (std::size_t N : {4, 16, 128}) {
      auto e = mu_estimate(*g.oracle, opts(N));
      CHECK(e.lower == doctest::Approx(0.5).epsilon(1e-14));
      REQUIRE(e.cycle);
      CHECK(witness_mean(*g.oracle, *e.cycle) == doctest::Approx(0.5).epsilon(1e-14));
      attach_known(e, g, "mu");
      // Convergence needs two doublings on the schedule.
      CHECK(e.converged == (e.schedule.size() >= 3));
    }
  }
}

TEST_SUITE("simple paths") {
  TEST_CASE("forward_shift path of ones") {
    const auto e = simple_path_sup(*gallery("forward_shift").oracle, 6, 4);
    CHECK(e.lower == 1);
    CHECK(e.exact);
    REQUIRE(e.path);
    CHECK(e.path->indices.size() == 5);
  }

  TEST_CASE("diagonal oracles have no simple paths") {
    for (std::size_t k = 1; k <= 5; ++k) {
      CHECK(simple_path_sup(*gallery("diag_inverse").oracle, 12, k).lower == 0);
      CHECK(simple_path_sup(*gallery("diag_const", {{"c", 3}}).oracle, 12, k).lower == 0);
    }
  }

  TEST_CASE("kakutani N=10 against enumeration") {
    const auto o = gallery("kakutani").oracle;
    const auto d = truncate(*o, 10)->dense().to_linear();
    const auto t = simple_path_table(*o, 10, 9, true);
    for (std::size_t k = 1; k <= 9; ++k) CHECK(t.c[k].value() == doctest::Approx(oracle::exhaustive_simple_path_max(d, k)).epsilon(1e-14));
    const auto e = simple_path_sup(*o, 10, 8);
    // Only the superdiagonal is nonzero: paths 1..9 or 2..10.
    const double w19 = 1 * 0.5 * 1 * 0.25 * 1 * 0.5 * 1 * 0.125;
    const double w210 = 0.5 * 1 * 0.25 * 1 * 0.5 * 1 * 0.125 * 1;
    CHECK(e.lower == doctest::Approx(std::max(w19, w210)));
    REQUIRE(e.path);
    double w = 1;
    for (std::size_t p = 0; p + 1 < e.path->indices.size(); ++p) w *= o->entry(e.path->indices[p + 1], e.path->indices[p]);
    CHECK(w == doctest::Approx(e.lower).epsilon(1e-14));
  }

  TEST_CASE("exact table equals exhaustive enumeration on random tables") {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 60; ++t) {
      const std::size_t n = 2 + t % 6;
      const auto d = oracle::random_dense(rng, n, 0.5);
      const auto o = table_oracle(FiniteMaxMatrix::from_rows(d));
      const auto tab = simple_path_table(*o, n, n - 1, true);
      for (std::size_t k = 1; k < n; ++k) {
        REQUIRE(tab.c[k].value() == doctest::Approx(oracle::exhaustive_simple_path_max(d, k)).epsilon(1e-13));
        if (tab.witness[k]) {
          const auto& idx = tab.witness[k]->indices;
          CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == idx.size());
        }
      }
    }
  }

  TEST_CASE("beam search is a flagged lower bound") {
    std::mt19937_64 rng(52);
    for (int t = 0; t < 20; ++t) {
      const auto d = oracle::random_dense(rng, 12, 0.3);
      const auto o = table_oracle(FiniteMaxMatrix::from_rows(d));
      const auto ex = simple_path_table(*o, 12, 11, true);
      const auto bm = simple_path_table(*o, 12, 11, false, 16);
      CHECK(!bm.exact);
      for (std::size_t k = 1; k <= 11; ++k) CHECK(bm.c[k] <= ex.c[k]);
    }
    CHECK_THROWS_AS(simple_path_table(*gallery("kakutani").oracle, 21, 8, true), ResourceLimit);
    const auto h = simple_path_sup(*gallery("kakutani").oracle, 64, 8);
    CHECK(!h.exact);
  }
}

TEST_SUITE("r prime") {
  TEST_CASE("backward_shift reaches 1 at k = 1024") {
    const auto e = r_prime_estimate(*gallery("backward_shift").oracle, opts(2048, 1024));
    CHECK(e.proxy);
    CHECK(e.lower >= 0.999);
  }

  TEST_CASE("forward_shift reaches 1") {
    const auto e = r_prime_estimate(*gallery("forward_shift").oracle, opts(2048, 1024));
    CHECK(e.lower >= 0.999);
  }

  TEST_CASE("diag_inverse is 0") { CHECK(r_prime_estimate(*gallery("diag_inverse").oracle, opts(64, 16)).lower == 0); }

  TEST_CASE("star_means long simple paths die") {
    const auto o = gallery("star_means").oracle;
    const auto d = truncate(*o, 12)->dense().to_linear();
    for (std::size_t k = 3; k <= 11; ++k) CHECK(oracle::exhaustive_simple_path_max(d, k) == 0);
    CHECK(r_prime_estimate(*o, opts(12, 11)).lower == 0);
    CHECK(r_prime_estimate(*o, opts(256, 32)).lower == 0);
  }
}

TEST_SUITE("r ess") {
  TEST_CASE("star_means has a zero tail") {
    const auto e = r_ess_estimate(*gallery("star_means").oracle, {1, 2, 4}, opts(128));
    for (const auto& rec : e.schedule) CHECK(rec.value == 0);
    REQUIRE(e.upper);
    CHECK(*e.upper == 0);
    CHECK(e.lower == 0);
    CHECK(e.converged);
  }

  TEST_CASE("epsilon_cycle stays honestly unconverged") {
    const auto g = gallery("epsilon_cycle", {{"eps", 0.5}});
    auto e = r_ess_estimate(*g.oracle, {1, 2, 4, 8}, opts(128));
    for (const auto& rec : e.schedule) CHECK(rec.value == 0);
    attach_known(e, g, "r_ess");
    REQUIRE(e.known);
    CHECK(e.known->value == 1.0);
    CHECK(!e.converged);
  }

  TEST_CASE("diag_inverse tail windows") {
    const auto e = r_ess_estimate(*gallery("diag_inverse").oracle, {1, 3, 7, 15}, opts(64));
    REQUIRE(e.schedule.size() == 4);
    for (const auto& rec : e.schedule) {
      REQUIRE(rec.n);
      CHECK(rec.value == doctest::Approx(1.0 / double(*rec.n + 1)).epsilon(1e-14));
    }
  }

  TEST_CASE("schedule validation") {
    const auto o = gallery("diag_inverse").oracle;
    CHECK_THROWS_AS(r_ess_estimate(*o, {4, 2}, opts(64)), ValidationError);
    CHECK_THROWS_AS(r_ess_estimate(*o, {2, 2}, opts(64)), ValidationError);
    CHECK_THROWS_AS(r_ess_estimate(*o, {64}, opts(64)), ValidationError);
  }
}

TEST_SUITE("local radii and m") {
  TEST_CASE("diag_inverse exact at N >= j") {
    const auto o = gallery("diag_inverse").oracle;
    for (std::size_t j : {1, 2, 7, 30}) {
      const auto e = local_radius_estimate(*o, j, opts(64));
      CHECK(e.lower == doctest::Approx(1.0 / j).epsilon(1e-15));
      for (const auto& rec : e.schedule)
        if (rec.N >= j) CHECK(rec.value == doctest::Approx(1.0 / j).epsilon(1e-15));
      check_monotone(e);
    }
    const auto m = m_estimate(*o, std::nullopt, opts(64));
    CHECK(m.lower == 1);
    const auto me = m_e_estimate(*o, std::nullopt, opts(256));
    CHECK(me.proxy);
    CHECK(me.lower <= 1.0 / 192 + 1e-15);
  }

  TEST_CASE("star_means j = 2 climbs towards 1") {
    const auto g = gallery("star_means");
    auto e = local_radius_estimate(*g.oracle, 2, opts(512));
    check_monotone(e);
    CHECK(e.lower == doctest::Approx(511.0 / 512).epsilon(1e-12));
    REQUIRE(g.local_radius);
    CHECK(*g.local_radius(2) == 1.0);
  }

  TEST_CASE("forward_shift: zero windows, m known 1, not converged") {
    const auto g = gallery("forward_shift");
    for (std::size_t j : {1, 5, 40}) CHECK(local_radius_estimate(*g.oracle, j, opts(256)).lower == 0);
    auto m = m_estimate(*g.oracle, std::nullopt, opts(256));
    CHECK(m.lower == 0);
    attach_known(m, g, "m");
    REQUIRE(m.known);
    CHECK(m.known->value == 1.0);
    CHECK(!m.converged);
  }

  TEST_CASE("some early index attains r when r_ess < r") {
    const auto o = gallery("star_means").oracle;
    const auto r = radius_estimate(*o, opts(256));
    bool found = false;
    for (std::size_t j = 1; j <= 16 && !found; ++j)
      found = std::abs(local_radius_estimate(*o, j, opts(256)).lower - r.lower) <= 1e-6;
    CHECK(found);
  }
}

TEST_SUITE("radius") {
  TEST_CASE("kakutani window Gelfand") {
    const auto g = gallery("kakutani");
    auto e = radius_estimate(*g.oracle, opts(2048, 1024));
    REQUIRE(e.heuristic);
    // ||A^1024||^(1/1024) = 2^-(sum_{j=1}^{9} j 2^{-j-1} + 10/1024) on a 2048-window.
    double l2 = 10.0 / 1024;
    for (int j = 1; j <= 9; ++j) l2 += j * std::ldexp(1.0, -j - 1);
    CHECK(std::abs(*e.heuristic - std::exp2(-l2)) <= 1e-3);
    CHECK(std::abs(*e.heuristic - 0.50034) <= 1e-3);
    CHECK(e.lower == 0);
    attach_known(e, g, "r");
    CHECK(!e.converged);
  }

  TEST_CASE("epsilon_cycle and zero") {
    const auto g = gallery("epsilon_cycle", {{"eps", 0.5}});
    auto e = radius_estimate(*g.oracle, opts(256));
    check_bracket(e);
    attach_known(e, g, "r");
    REQUIRE(e.known);
    CHECK(e.known->value == 1.0);
    REQUIRE(e.upper);
    CHECK(*e.upper >= 1);
    const auto z = radius_estimate(*gallery("zero").oracle, opts(64));
    CHECK(z.lower == 0);
    REQUIRE(z.upper);
    CHECK(*z.upper == 0);
  }

  TEST_CASE("ordering chain") {
    for (const char* name : {"star_means", "diag_inverse", "diag_ratio", "backward_shift", "kakutani"}) {
      const auto o = gallery(name).oracle;
      const auto r = radius_estimate(*o, opts(256, 32));
      const auto mu = mu_estimate(*o, opts(256, 32));
      const auto m = m_estimate(*o, std::nullopt, opts(256, 32));
      CHECK(mu.lower <= m.lower + 1e-15);
      CHECK(r.lower >= mu.lower);
      CHECK(r.lower >= m.lower);
      for (const auto* e : {&r, &mu, &m}) check_bracket(*e);
      if (r.upper) {
        CHECK(mu.lower <= *r.upper);
        CHECK(m.lower <= *r.upper);
      }
    }
  }
}

TEST_SUITE("c(e_j)") {
  TEST_CASE("star_means j = 1") {
    const auto o = gallery("star_means").oracle;
    const auto e = c_ej_estimate(*o, 1, 1.0, opts(128));
    CHECK(e.lower == doctest::Approx(std::pow(127.0 / 128, 2)).epsilon(1e-12));
    REQUIRE(e.cycle);
    CHECK(e.cycle->nodes.front() == 1);
    check_monotone(e);
  }

  TEST_CASE("self-loop and acyclic") {
    CHECK(c_ej_estimate(*gallery("diag_const", {{"c", 2}}).oracle, 1, 2.0, opts(32)).lower == doctest::Approx(1.0));
    CHECK(c_ej_estimate(*gallery("backward_shift").oracle, 3, 1.0, opts(64)).lower == 0);
    CHECK_THROWS_AS(c_ej_estimate(*gallery("star_means").oracle, 1, 0.0, opts(32)), ValidationError);
  }
}

TEST_SUITE("eigenvector series") {
  TEST_CASE("star_means residual within 2/N") {
    const auto c = eigenvector_construct(*gallery("star_means").oracle, 1, 1.0, 512, 64);
    CHECK(c.residual <= 2.0 / 512);
    CHECK(c.residual == doctest::Approx(2.0 / 512 - 1.0 / (512.0 * 512)).epsilon(1e-9));
    const double x1 = c.x[0].value();
    for (std::size_t n = 2; n <= 512; n *= 2) CHECK(c.x[n - 1].value() == doctest::Approx((n - 1.0) / n * x1).epsilon(1e-12));
    double prev = 1;
    for (std::size_t N : {32, 64, 128, 256, 512}) {
      const double r = eigenvector_construct(*gallery("star_means").oracle, 1, 1.0, N).residual;
      CHECK(r < prev);
      prev = r;
    }
  }

  TEST_CASE("irreducible table is strictly positive with zero residual") {
    const auto a = FiniteMaxMatrix::from_rows({{0, 2, 0}, {0, 0, 3}, {4, 0, 0}});
    const auto o = table_oracle(a);
    const double t = radius_finite(a).value();
    const auto c = eigenvector_construct(*o, 1, t, 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(!c.x[i].is_zero());
    CHECK(c.residual <= 1e-12);
  }

  TEST_CASE("forward_shift never gets close") {
    for (std::size_t N : {2, 8, 64, 256, 512}) CHECK(eigenvector_construct(*gallery("forward_shift").oracle, 1, 1.0, N).residual >= 0.5);
  }

  TEST_CASE("unbounded series aborts") {
    CHECK_THROWS_AS(eigenvector_construct(*scaled(gallery("backward_shift").oracle, 2), 40, 1.0, 64), ResourceLimit);
    CHECK_THROWS_AS(eigenvector_construct(*gallery("star_means").oracle, 1, 0.0, 16), ValidationError);
  }
}

TEST_SUITE("approximate point spectrum probe") {
  TEST_CASE("diag_inverse at t = 1/j") {
    for (std::size_t j : {1, 3, 9}) {
      const auto p = ap_spectrum_probe(*gallery("diag_inverse").oracle, 1.0 / j, 64, 16);
      CHECK(p.value == 0);
    }
  }

  TEST_CASE("backward_shift on [0, 1]") {
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto p = ap_spectrum_probe(*gallery("backward_shift").oracle, t, 1000, 64);
      CHECK(p.value <= 2e-3);
      CHECK(p.certified);
    }
  }

  TEST_CASE("value is a real residual") {
    const auto p = ap_spectrum_probe(*gallery("diag_const", {{"c", 1}}).oracle, 0.5, 32, 8);
    CHECK(p.value == doctest::Approx(0.5));
  }
}

TEST_SUITE("power bound and irreducibility") {
  TEST_CASE("power bound") {
    const auto s = power_bound_check(*gallery("star_means").oracle, 128, 64);
    CHECK(s.bounded);
    CHECK(s.sup.value() <= 1);
    const auto d = power_bound_check(*gallery("diag_const", {{"c", 1}}).oracle, 16, 32);
    for (const auto& v : d.norms) CHECK(v.value() == 1);
    const auto b = power_bound_check(*scaled(gallery("backward_shift").oracle, 2), 64, 32);
    CHECK(!b.bounded);
    for (std::size_t k = 1; k <= 32; ++k) CHECK(b.norms[k - 1].value() == std::ldexp(1.0, int(k)));
  }

  TEST_CASE("irreducibility") {
    const auto e = irreducibility_check(*gallery("epsilon_cycle", {{"eps", 0.5}}).oracle, 64);
    CHECK(e.window_irreducible);
    CHECK(e.oracle_irreducible == true);
    const auto d = irreducibility_check(*gallery("diag_inverse").oracle, 32);
    CHECK(!d.window_irreducible);
    CHECK(d.classes == 32);
    for (std::size_t N : {2, 3, 17, 200}) CHECK(irreducibility_check(*gallery("star_means").oracle, N).window_irreducible);
  }
}

TEST_SUITE("estimator invariants") {
  TEST_CASE("monotone schedules and brackets across the gallery") {
    const std::vector<std::pair<std::string, json>> entries = {
        {"star_means", json::object()}, {"diag_ratio", json::object()},   {"diag_inverse", json::object()},
        {"kakutani", json::object()},   {"forward_shift", json::object()}, {"backward_shift", json::object()},
        {"epsilon_cycle", {{"eps", 0.3}}}, {"holder_family", {{"alpha", 1}, {"k", 4}}}};
    for (const auto& [name, params] : entries) {
      const auto o = gallery(name, params).oracle;
      const auto opt = opts(256, 32);
      const auto mu = mu_estimate(*o, opt);
      const auto m = m_estimate(*o, std::nullopt, opt);
      check_monotone(mu);
      check_monotone(m);
      check_bracket(mu);
      check_bracket(m);
      for (std::size_t j : {1, 2, 5, 17}) check_monotone(local_radius_estimate(*o, j, opt));
      check_bracket(radius_estimate(*o, opt));
      if (mu.cycle) CHECK(witness_mean(*o, *mu.cycle) == doctest::Approx(mu.lower).epsilon(1e-12));
    }
  }

  TEST_CASE("random table oracles agree with finite spectra") {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 40; ++t) {
      const std::size_t n = 1 + t % 8;
      const auto a = FiniteMaxMatrix::from_rows(oracle::random_dense(rng, n));
      const auto o = table_oracle(a);
      const auto s = spectrum(a);
      CHECK(log_close(MaxScalar::from_linear(mu_estimate(*o, opts(32)).lower), s.mu, 1e-12));
      for (std::size_t j = 1; j <= n; ++j)
        CHECK(log_close(MaxScalar::from_linear(local_radius_estimate(*o, j, opts(32)).lower), s.local_radii[j - 1], 1e-12));
    }
  }

  TEST_CASE("thread count does not change any reported value") {
    const auto o = gallery("star_means").oracle;
    json one, eight;
    {
      ThreadsGuard g("1");
      one = {to_json(mu_estimate(*o, opts(512))), to_json(m_estimate(*o, std::nullopt, opts(512))),
             to_json(radius_estimate(*o, opts(512, 32))), to_json(r_ess_estimate(*o, {1, 2, 4}, opts(512)))};
    }
    {
      ThreadsGuard g("8");
      eight = {to_json(mu_estimate(*o, opts(512))), to_json(m_estimate(*o, std::nullopt, opts(512))),
               to_json(radius_estimate(*o, opts(512, 32))), to_json(r_ess_estimate(*o, {1, 2, 4}, opts(512)))};
    }
    CHECK(one.dump() == eight.dump());
  }
}
