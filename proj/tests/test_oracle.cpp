#include <doctest.h>

#include <cmath>
#include <future>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "maxspec/blockform.hpp"
#include "maxspec/errors.hpp"
#include "maxspec/finite_spectral.hpp"
#include "maxspec/gallery.hpp"
#include "maxspec/oracle.hpp"

using namespace maxspec;
using nlohmann::json;

namespace {

double dense_at(const Truncation& t, std::size_t i, std::size_t j) { return t.dense()(i, j).value(); }

}  // namespace

TEST_SUITE("truncation") {
  TEST_CASE("backward_shift N=3") {
    const auto t = truncate(*gallery("backward_shift").oracle, 3);
    CHECK(t->dim() == 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(dense_at(*t, i, j) == (j == i + 1 ? 1.0 : 0.0));
  }

  TEST_CASE("kakutani N=4 superdiagonal") {
    const auto t = truncate(*gallery("kakutani").oracle, 4);
    CHECK(dense_at(*t, 0, 1) == 1);
    CHECK(dense_at(*t, 1, 2) == 0.5);
    CHECK(dense_at(*t, 2, 3) == 1);
    CHECK(t->sparse().nonzeros() == 3);
    CHECK(kakutani_weight(12) == 0.25);
    CHECK(kakutani_weight(1024) == std::ldexp(1.0, -10));
  }

  TEST_CASE("N=1 is the single entry") {
    for (const char* name : {"diag_ratio", "star_means", "diag_inverse"}) {
      const auto g = gallery(name);
      const auto t = truncate(*g.oracle, 1);
      CHECK(t->dim() == 1);
      CHECK(dense_at(*t, 0, 0) == g.oracle->entry(1, 1));
    }
    CHECK_THROWS_AS(truncate(*gallery("zero").oracle, 0), ValidationError);
  }

  TEST_CASE("tail windows") {
    const auto s = tail_truncate(*gallery("star_means").oracle, 1, 40);
    CHECK(s->dim() == 39);
    CHECK(s->sparse().nonzeros() == 0);
    const auto d = tail_truncate(*gallery("diag_inverse").oracle, 3, 6);
    REQUIRE(d->dim() == 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(dense_at(*d, i, j) == (i == j ? 1.0 / double(i + 4) : 0.0));
    const auto e = tail_truncate(*gallery("epsilon_cycle", {{"eps", 0.5}}).oracle, 1, 5);
    REQUIRE(e->dim() == 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(dense_at(*e, i, j) == (i == j + 1 ? 1.0 : 0.0));
    CHECK_THROWS_AS(tail_truncate(*gallery("zero").oracle, 5, 5), ValidationError);
  }

  TEST_CASE("realized entries equal oracle probes bit-exactly") {
    for (const auto& info : gallery_list()) {
      if (!info.parameters.empty()) continue;
      const auto g = gallery(info.name);
      const auto t = truncate(*g.oracle, 48);
      const auto u = tail_truncate(*g.oracle, 7, 48);
      for (std::size_t i = 1; i <= 48; ++i)
        for (std::size_t j = 1; j <= 48; ++j) {
          REQUIRE(t->dense()(i - 1, j - 1) == g.oracle->at(i, j));
          if (i > 7 && j > 7) REQUIRE(u->dense()(i - 8, j - 8) == g.oracle->at(i, j));
        }
    }
  }

  TEST_CASE("leading truncations are monotone in N") {
    for (const char* name : {"star_means", "diag_ratio", "diag_inverse", "kakutani", "forward_shift", "backward_shift"}) {
      const auto g = gallery(name);
      MaxScalar r_prev, mu_prev;
      std::vector<MaxScalar> loc_prev;
      for (std::size_t N : {4, 8, 16, 32, 64}) {
        const auto& a = truncate(*g.oracle, N)->dense();
        const auto small = truncate(*g.oracle, N / 2)->dense();
        for (std::size_t i = 0; i < N / 2; ++i)
          for (std::size_t j = 0; j < N / 2; ++j) REQUIRE(small(i, j) == a(i, j));
        const auto s = spectrum(a);
        CHECK(s.radius >= r_prev);
        CHECK(s.mu >= mu_prev);
        for (std::size_t j = 0; j < loc_prev.size(); ++j) CHECK(s.local_radii[j] >= loc_prev[j]);
        r_prev = s.radius;
        mu_prev = s.mu;
        loc_prev = s.local_radii;
      }
    }
  }

  TEST_CASE("concurrent truncate calls share one realization") {
    const auto g = gallery("star_means");
    std::vector<std::future<TruncationPtr>> fs;
    for (int t = 0; t < 8; ++t) fs.push_back(std::async(std::launch::async, [&] { return truncate(*g.oracle, 300); }));
    std::vector<TruncationPtr> got;
    for (auto& f : fs) got.push_back(f.get());
    for (const auto& p : got) {
      CHECK(p->dense() == got[0]->dense());
      CHECK(p->dim() == 300);
    }
    CHECK(truncate(*g.oracle, 300).get() == truncate(*g.oracle, 300).get());
  }
}

TEST_SUITE("oracle contract") {
  TEST_CASE("entries within [0, norm_bound] and deterministic") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<std::size_t> idx(1, 5000);
    const std::vector<std::pair<std::string, json>> entries = {
        {"backward_shift", json::object()},  {"forward_shift", json::object()},  {"diag_ratio", json::object()},
        {"diag_inverse", json::object()},    {"star_means", json::object()},     {"epsilon_cycle", {{"eps", 0.3}}},
        {"kakutani", json::object()},        {"kakutani_cutoff", {{"m", 3}}},    {"holder_family", {{"alpha", 1}, {"k", 4}}},
        {"shift_perturbed", {{"n", 6}, {"eps", 0.1}, {"eps_prime", 0.05}}}, {"zero", json::object()}};
    for (const auto& [name, params] : entries) {
      const auto g = gallery(name, params);
      for (int t = 0; t < 10000; ++t) {
        const std::size_t i = idx(rng) % (t % 2 ? 5000 : 40) + 1, j = idx(rng) % (t % 3 ? 5000 : 40) + 1;
        const double v = g.oracle->entry(i, j);
        REQUIRE(v >= 0);
        REQUIRE(v <= g.oracle->norm_bound());
        REQUIRE(v == g.oracle->entry(i, j));
      }
    }
  }

  TEST_CASE("forward and backward shifts are transposes") {
    const auto f = gallery("forward_shift").oracle, b = gallery("backward_shift").oracle;
    const auto tb = transposed(b);
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::size_t> idx(1, 64);
    for (int t = 0; t < 10000; ++t) {
      const std::size_t i = idx(rng), j = t % 4 ? idx(rng) : i + 1;
      REQUIRE(f->entry(i, j) == b->entry(j, i));
      REQUIRE(f->entry(i, j) == tb->entry(i, j));
    }
  }

  TEST_CASE("violations and index 0") {
    const MatrixOracle neg("neg", [](std::size_t, std::size_t) { return -1.0; }, 1);
    CHECK_THROWS_AS(neg.entry(1, 1), OracleViolation);
    const MatrixOracle big("big", [](std::size_t i, std::size_t) { return double(i); }, 3);
    CHECK(big.entry(3, 1) == 3);
    CHECK_THROWS_AS(big.entry(4, 1), OracleViolation);
    CHECK_THROWS_AS(truncate(big, 5), OracleViolation);
    const MatrixOracle nan("nan", [](std::size_t, std::size_t) { return std::nan(""); }, 1);
    CHECK_THROWS_AS(nan.entry(2, 2), OracleViolation);
    CHECK_THROWS_AS(big.entry(0, 1), ValidationError);
  }

  TEST_CASE("scaled oracle") {
    const auto s = scaled(gallery("star_means").oracle, 3);
    CHECK(s->entry(1, 4) == 3 * 0.75);
    CHECK(s->norm_bound() == 3);
  }
}

TEST_SUITE("custom JSON oracles") {
  TEST_CASE("table") {
    const auto o = oracle_from_json(json::parse(R"({"kind":"table","matrix":{"n":2,"entries":[[0,2],[3,0]]}})"));
    CHECK(o->entry(1, 2) == 2);
    CHECK(o->entry(2, 1) == 3);
    CHECK(o->entry(3, 3) == 0);
    CHECK(o->entry(100, 1) == 0);
    CHECK(radius_finite(truncate(*o, 10)->dense()).value() == doctest::Approx(std::sqrt(6.0)));
  }

  TEST_CASE("banded") {
    const auto o = oracle_from_json(json::parse(
        R"({"kind":"banded","norm_bound":1,"bands":[{"offset":1,"value":0.5},{"offset":-1,"values":[1,0.25],"repeat":true}]})"));
    CHECK(o->entry(1, 2) == 0.5);
    CHECK(o->entry(7, 8) == 0.5);
    CHECK(o->entry(2, 1) == 1);
    CHECK(o->entry(3, 2) == 0.25);
    CHECK(o->entry(4, 3) == 1);
    CHECK(o->entry(1, 3) == 0);
    CHECK(o->hints().upper_bandwidth == 1u);
    CHECK(o->hints().lower_bandwidth == 1u);
    const auto t = truncate(*o, 6);
    CHECK(t->sparse().nonzeros() == 10);
  }

  TEST_CASE("sparse_rule") {
    const auto o = oracle_from_json(json::parse(
        R"({"kind":"sparse_rule","norm_bound":1,"rules":[{"row":1,"col_from":2,"value":1,"ratio":0.5},{"row_from":2,"col":1,"value":0.25,"ratio":1}]})"));
    CHECK(o->entry(1, 2) == 1);
    CHECK(o->entry(1, 4) == 0.25);
    CHECK(o->entry(9, 1) == 0.25);
    CHECK(o->entry(2, 2) == 0);
    const auto t = truncate(*o, 5);
    CHECK(t->sparse().nonzeros() == 8);
  }

  TEST_CASE("malformed specs") {
    for (const char* s : {R"({"kind":"nope"})", R"({"kind":"banded","norm_bound":1,"bands":[]})",
                          R"({"kind":"banded","norm_bound":-1,"bands":[{"offset":0,"value":1}]})",
                          R"({"kind":"banded","norm_bound":1,"bands":[{"offset":0}]})",
                          R"({"kind":"sparse_rule","norm_bound":1,"rules":[{"row":0,"col":1,"value":1}]})",
                          R"({"kind":"sparse_rule","norm_bound":1,"rules":[{"row":1,"col_from":1,"value":1,"ratio":2}]})",
                          R"({"kind":"table","matrix":{"n":2,"entries":[[1]]}})", R"([1,2])"})
      CHECK_THROWS_AS(oracle_from_json(json::parse(s)), ValidationError);
  }

  TEST_CASE("norm bound is enforced on probes") {
    const auto o = oracle_from_json(json::parse(R"({"kind":"banded","norm_bound":0.5,"bands":[{"offset":0,"value":1}]})"));
    CHECK_THROWS_AS(o->entry(1, 1), OracleViolation);
  }
}

TEST_SUITE("gallery") {
  TEST_CASE("registry and parameters") {
    CHECK(gallery_list().size() >= 10);
    CHECK_THROWS_AS(gallery("no_such"), ValidationError);
    CHECK_THROWS_AS(gallery("epsilon_cycle"), ValidationError);
    for (double e : {0.0, 1.0, -0.5}) CHECK_THROWS_AS(gallery("epsilon_cycle", {{"eps", e}}), ValidationError);
    CHECK_THROWS_AS(gallery("kakutani_cutoff", {{"m", 0}}), ValidationError);
    CHECK_THROWS_AS(gallery("holder_family", {{"alpha", 0}, {"k", 2}}), ValidationError);
    CHECK_THROWS_AS(gallery("holder_family", {{"alpha", 1}, {"k", 1}}), ValidationError);
    CHECK_THROWS_AS(gallery("shift_perturbed", {{"n", 4}, {"eps", 0.1}, {"eps_prime", 0.2}}), ValidationError);
    CHECK_THROWS_AS(gallery("star_means", {{"x", 1}}), ValidationError);
  }

  TEST_CASE("known values") {
    const auto b = gallery("backward_shift");
    CHECK(b.known_value("mu") == 0.0);
    CHECK(b.known_value("m") == 0.0);
    CHECK(b.known_value("r") == 1.0);
    const auto d = gallery("diag_inverse");
    for (const char* k : {"mu", "m", "r"}) CHECK(d.known_value(k) == 1.0);
    for (const char* k : {"m_e", "r_prime", "r_ess"}) CHECK(d.known_value(k) == 0.0);
    REQUIRE(d.local_radius);
    for (std::size_t j = 1; j <= 10; ++j) CHECK(d.local_radius(j) == doctest::Approx(1.0 / j));
    const auto e = gallery("epsilon_cycle", {{"eps", 0.5}});
    CHECK(e.known_value("r") == 1.0);
    CHECK(e.known_value("mu") == 0.5);
    CHECK(e.known_value("r_ess") == 1.0);
    REQUIRE(e.known.count("sigma_p"));
    CHECK(e.known.at("sigma_p").text == "empty");
    CHECK(gallery("kakutani").known_value("r") == 0.5);
    const auto s = gallery("star_means");
    REQUIRE(s.local_radius);
    for (std::size_t j = 2; j <= 10; ++j) CHECK(s.local_radius(j) == 1.0);
    for (const auto& info : gallery_list()) {
      json params = json::object();
      if (info.name == "epsilon_cycle") params = {{"eps", 0.5}};
      if (info.name == "kakutani_cutoff") params = {{"m", 2}};
      if (info.name == "holder_family") params = {{"alpha", 1}, {"k", 2}};
      if (info.name == "shift_perturbed") params = {{"n", 4}, {"eps", 0.1}, {"eps_prime", 0.0}};
      if (info.name == "diag_const") params = {{"c", 2}};
      if (info.name == "forward_shift_bump") params = {{"k", 3}};
      const auto g = gallery(info.name, params);
      CHECK(g.oracle->name() == info.name);
      for (const auto& [key, kv] : g.known) CHECK_MESSAGE(!kv.justification.empty(), info.name << " " << key);
    }
  }

  TEST_CASE("holder block sizes satisfy their defining inequality minimally") {
    for (double alpha : {0.5, 1.0, 2.0})
      for (std::size_t k = 2; k <= 40; ++k) {
        const std::size_t n = holder_block_size(alpha, k);
        CHECK(holder_inequality(alpha, k, n));
        if (n > 1) CHECK(!holder_inequality(alpha, k, n - 1));
        const double lhs = std::pow(1 + 1.0 / k, double(n - 1) / n) * std::pow(double(k), -2.0 / (alpha * n));
        CHECK(lhs > 1 + 0.5 / k);
      }
    CHECK(holder_block_size(1, 1) == 1);
  }

  TEST_CASE("holder layout enumerates blocks diagonally") {
    const auto layout = holder_layout(1.0, 256);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t p = 1; p <= layout.size(); ++p) {
      const auto [i, j] = layout.pairs[p];
      REQUIRE(layout.index_of(i, j) == p);
      CHECK(j >= 1);
      CHECK(j <= layout.block_size[i]);
      seen.insert({i, j});
    }
    CHECK(seen.size() == layout.size());
  }
}
