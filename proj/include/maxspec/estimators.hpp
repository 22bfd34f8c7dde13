#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxspec/finite_spectral.hpp"
#include "maxspec/gallery.hpp"
#include "maxspec/oracle.hpp"

namespace maxspec {

struct ProbeRecord {
  std::size_t N = 0;
  std::size_t K = 0;
  double value = 0;
  /// Tail offset for r_ess tables.
  std::optional<std::size_t> n;
};

/// Bracket for one infinite-matrix quantity. `lower` is certified unless
/// `proxy` is set; witnesses use 1-based indices.
struct SpectralEstimate {
  std::string quantity;
  double lower = 0;
  std::optional<double> upper;
  /// Uncertified numerical value (window Gelfand, tail-window radius).
  std::optional<double> heuristic;
  bool proxy = false;
  /// False when a heuristic search (beam) produced the value.
  bool exact = true;
  std::optional<CycleWitness> cycle;
  std::optional<PathWitness> path;
  std::vector<ProbeRecord> schedule;
  bool converged = false;
  std::optional<KnownValue> known;
  std::vector<std::string> notes;
  nlohmann::json details = nlohmann::json::object();
};

struct EstimateOptions {
  /// Largest leading window; the schedule doubles from N0 up to N.
  std::size_t N = 1024;
  std::size_t N0 = 16;
  /// Power / path length horizon.
  std::size_t K = 64;
  double tol_rel = 1e-6;
  std::size_t beam_width = 1024;
  /// Windows up to this size use the exact subset program for c_k.
  std::size_t exact_path_limit = 20;
};

/// N0, 2 N0, 4 N0, ... below N, then N itself.
std::vector<std::size_t> doubling_schedule(std::size_t N0, std::size_t N);

/// Relative change below tol over the last two doublings.
bool stabilized(const std::vector<ProbeRecord>& schedule, double tol);

/// Attaches a gallery value and clears `converged` when the bracket cannot
/// be reconciled with it.
void attach_known(SpectralEstimate& e, const KnownValue& known);
void attach_known(SpectralEstimate& e, const GalleryEntry& g, const std::string& key);

SpectralEstimate mu_estimate(const MatrixOracle& o, const EstimateOptions& opt = {});

/// c_1..c_K of the leading N-window: best weight of a path with k edges and
/// distinct indices. Exact (subset program) for N <= exact_path_limit,
/// beam search otherwise.
struct SimplePathTable {
  std::size_t N = 0;
  bool exact = true;
  /// c[k] for k = 0..K (c[0] = 1); paths 1-based, i_0..i_k.
  std::vector<MaxScalar> c;
  std::vector<std::optional<PathWitness>> witness;
};

SimplePathTable simple_path_table(const MatrixOracle& o, std::size_t N, std::size_t K, std::optional<bool> exact = std::nullopt,
                                  std::size_t beam_width = 1024);
SpectralEstimate simple_path_sup(const MatrixOracle& o, std::size_t N, std::size_t k, std::optional<bool> exact = std::nullopt,
                                 std::size_t beam_width = 1024);

/// Proxy max_{k in [k_lo, K]} c_k^(1/k) on the N-window; k_lo defaults to K/2.
SpectralEstimate r_prime_estimate(const MatrixOracle& o, const EstimateOptions& opt = {},
                                  std::optional<std::size_t> k_lo = std::nullopt);

/// Tail windows [n+1..N] for each n of a strictly increasing schedule.
SpectralEstimate r_ess_estimate(const MatrixOracle& o, const std::vector<std::size_t>& n_schedule,
                                const EstimateOptions& opt = {});
std::vector<std::size_t> default_tail_schedule(std::size_t N);

SpectralEstimate local_radius_estimate(const MatrixOracle& o, std::size_t j, const EstimateOptions& opt = {});
/// max over j <= J of window local radii (J defaults to the window).
SpectralEstimate m_estimate(const MatrixOracle& o, std::optional<std::size_t> J = std::nullopt,
                            const EstimateOptions& opt = {});
/// Proxy: max of window local radii over the trailing J_window indices of
/// the largest window (default: last quarter).
SpectralEstimate m_e_estimate(const MatrixOracle& o, std::optional<std::size_t> J_window = std::nullopt,
                              const EstimateOptions& opt = {});
SpectralEstimate radius_estimate(const MatrixOracle& o, const EstimateOptions& opt = {});
/// sup over cycles through j of A(j, i_{k-1}, ..., i_1, j) / t^k on the windows.
SpectralEstimate c_ej_estimate(const MatrixOracle& o, std::size_t j, double t, const EstimateOptions& opt = {});

struct EigenCandidate {
  std::size_t base = 1;
  double t = 1;
  std::size_t N = 0;
  std::size_t depth = 0;
  /// True when the partial sums stopped changing before the depth ran out.
  bool stabilized = false;
  MaxVector x;
  /// ||A x - t x|| / ||x|| over rows 1..N - margin.
  double residual = 0;
  std::size_t margin = 0;
  bool margin_from_hint = false;
};

/// Partial sums of the series sum_j (A/t)^j e_{i0} on the N-window.
/// J defaults to 4N. Throws ResourceLimit when ||x|| exceeds 1e3.
EigenCandidate eigenvector_construct(const MatrixOracle& o, std::size_t i0, double t, std::size_t N,
                                     std::optional<std::size_t> J = std::nullopt);

struct ApProbe {
  double t = 0;
  /// Best ||A x - t x|| / ||x|| found.
  double value = 0;
  std::string candidate;
  /// True when every row that can be nonzero was evaluated.
  bool certified = false;
  std::size_t rows_checked = 0;
};

ApProbe ap_spectrum_probe(const MatrixOracle& o, double t, std::size_t N, std::size_t K);

struct PowerBoundReport {
  std::size_t N = 0;
  std::vector<MaxScalar> norms;  // ||A_N^k||, k = 1..K
  MaxScalar sup;
  double threshold = 0;
  bool bounded = true;
};

PowerBoundReport power_bound_check(const MatrixOracle& o, std::size_t N, std::size_t K);

struct IrreducibilityReport {
  std::size_t N = 0;
  std::size_t classes = 0;
  bool window_irreducible = false;
  std::optional<bool> oracle_irreducible;
};

IrreducibilityReport irreducibility_check(const MatrixOracle& o, std::size_t N);

}  // namespace maxspec
