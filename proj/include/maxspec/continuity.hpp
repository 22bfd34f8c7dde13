#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxspec/matrix.hpp"

namespace maxspec {

struct Inequality {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  /// lhs <= rhs * (1 + rel_tol) + abs_tol.
  bool holds = false;
};

/// Finite perturbation experiment. `inputs` holds everything needed to
/// rerun it through replay().
struct PerturbationReport {
  std::string op;
  nlohmann::json inputs;
  double distance = 0;
  double norm_base = 0;
  double norm_perturbed = 0;
  std::optional<double> r_base, r_perturbed, mu_base, mu_perturbed;
  std::optional<std::size_t> k;
  std::vector<Inequality> checks;
  nlohmann::json details = nlohmann::json::object();

  bool ok() const;
};

/// ||A^k - B^k|| <= k ||A - B|| max(||A||, ||B||)^(k-1).
PerturbationReport lipschitz_power_bound_check(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b, std::size_t k);

/// Requires mu(B) > eps > 0 and mu(A) > 0. k is the length of a critical
/// cycle of B (its mean is >= mu(B) - eps); the mirrored bound uses a
/// critical cycle of A.
PerturbationReport weaker_holder_bound_check(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b, double eps);

/// Reruns a report from its stored inputs.
PerturbationReport replay(const PerturbationReport& r);

struct KakutaniCutoff {
  std::size_t m = 0;
  std::size_t window = 0;
  /// Smallest p with A_m^p = 0.
  std::size_t nilpotency_index = 0;
  bool power_vanishes = false;  // A_m^(2^(m+1)) = 0
  double distance = 0;          // ||A - A_m||
  bool distance_exact = false;  // == 2^-m
};

struct KakutaniReport {
  std::size_t m_max = 0;
  std::vector<KakutaniCutoff> cutoffs;
  std::size_t gelfand_k = 0;
  std::size_t gelfand_N = 0;
  /// ||A_N^k||^(1/k) on the window, and the product formula for the same k.
  double gelfand = 0;
  double closed_form = 0;
  double r_known = 0.5;
  /// Window Gelfand value minus the (exactly zero) radii of the cutoffs.
  double gap = 0;
  std::vector<std::pair<std::size_t, double>> series;

  bool ok() const;
};

/// m_max <= 12; throws ResourceLimit above.
KakutaniReport kakutani_experiment(std::size_t m_max);

/// 2^-(sum_{j<m} j 2^-(j+1)) * 2^(-m/2^m).
double kakutani_product_formula(std::size_t m);

struct HolderRow {
  std::size_t k = 0;
  std::size_t n_k = 0;
  std::size_t window = 0;
  double distance = 0;
  /// Single-cycle mean of block k (a lower bound of r(B_k)).
  double r_cycle = 0;
  /// Karp on the window, cross-check.
  double r_window = 0;
  double ratio = 0;
  double bound = 0;  // k / 2
  bool holds = false;
};

struct HolderReport {
  double alpha = 1;
  double r_base = 1;
  std::vector<HolderRow> rows;

  bool ok() const;
};

HolderReport holder_experiment(double alpha, const std::vector<std::size_t>& k_list);

struct LipschitzCounterexample {
  double eps = 0;
  double eps_prime = 0;
  std::size_t n = 0;
  double r_b = 0;
  double r_c = 0;
  double r_c_closed = 0;
  double dist_ab = 0;
  double dist_ac = 0;
  double dist_bc = 0;
  double ratio = 0;
  /// ratio for n' = 2..n.
  std::vector<std::pair<std::size_t, double>> series;

  bool ok() const;
};

LipschitzCounterexample lipschitz_counterexample(double eps, double eps_prime, std::size_t n);

using SequenceGenerator = std::function<FiniteMaxMatrix(std::size_t n)>;

struct SemicontinuityReport {
  std::string name;
  std::vector<double> distances;
  std::vector<double> r;
  std::vector<double> mu;
  double r_target = 0;
  double mu_target = 0;
  /// Over the last quarter of the terms.
  double limsup_r = 0;
  double liminf_mu = 0;
  double tol = 1e-9;
  bool r_upper = false;
  bool mu_lower = false;
  bool r_strict = false;
  bool mu_strict = false;
  std::vector<std::string> notes;

  bool ok() const { return r_upper && mu_lower; }
};

/// Terms n = 1..count. Throws ValidationError when the distances to the
/// target increase or do not shrink.
SemicontinuityReport semicontinuity_scan(const std::string& name, const FiniteMaxMatrix& target,
                                         const SequenceGenerator& gen, std::size_t count, double tol = 1e-9);

/// A_n = A + E/n at a single entry (i, j), 0-based.
SequenceGenerator single_entry_bump(const FiniteMaxMatrix& a, std::size_t i, std::size_t j);
/// Random perturbation shrinking fast enough that the tail is within
/// rounding of the limit: nonzero entries scaled by 1 + s 2^-(n+12),
/// |s| <= 1, chosen zero entries raised to c 2^-(2^n).
SequenceGenerator geometric_perturbation(const FiniteMaxMatrix& a, std::uint64_t seed);

/// Kakutani cutoffs: r(A_m) = 0 for every m while r(A) = 1/2.
SemicontinuityReport kakutani_scan(std::size_t m_max);
/// B_k = forward shift + a_{1k} = 1/k: mu(B_k) = k^(-1/k) from the window
/// Karp value, compared with the closed form.
SemicontinuityReport mu_bump_scan(const std::vector<std::size_t>& k_list);

}  // namespace maxspec
