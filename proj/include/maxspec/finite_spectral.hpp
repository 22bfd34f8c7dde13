#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "maxspec/matrix.hpp"

namespace maxspec {

/// A simple cycle c_1 -> c_2 -> ... -> c_k -> c_1 of the digraph
/// (a_{c_t c_{t+1}} > 0), rotated so the smallest index comes first.
struct CycleWitness {
  std::vector<std::size_t> nodes;
  MaxScalar geometric_mean;

  std::size_t length() const { return nodes.size(); }
  /// The closed path in path_weight order (i_0..i_k with i_0 = i_k), whose
  /// weight is geometric_mean^k.
  std::vector<std::size_t> closed_path() const;
};

struct CycleMean {
  MaxScalar value;
  std::optional<CycleWitness> witness;
};

/// Maximum cycle geometric mean r(A) = mu(A), exact up to rounding, with a
/// critical cycle. Karp's recurrence runs per strongly connected class on
/// natural-log weights; the reported value is the exact geometric mean of
/// the extracted cycle.
CycleMean max_cycle_geom_mean(const FiniteMaxMatrix& a);
CycleMean max_cycle_geom_mean(const SparseMaxMatrix& a);

/// Karp on one strongly connected class given by ascending node indices.
CycleMean class_cycle_mean(const SparseMaxMatrix& a, std::span<const std::size_t> nodes);

MaxScalar radius_finite(const FiniteMaxMatrix& a);

/// r_{e_j}(A): maximum cycle mean over the ancestors of j.
MaxScalar local_radius_finite(const FiniteMaxMatrix& a, std::size_t j);
CycleMean local_radius_witness(const SparseMaxMatrix& a, std::size_t j);

struct FiniteSpectrum {
  MaxScalar radius;
  MaxScalar mu;
  std::vector<MaxScalar> local_radii;
  /// Distinct local radii, ascending.
  std::vector<MaxScalar> point_spectrum;
  std::optional<CycleWitness> critical_witness;
};

FiniteSpectrum spectrum(const FiniteMaxMatrix& a);
std::vector<MaxScalar> point_spectrum_finite(const FiniteMaxMatrix& a);

/// Max eigenvector for t in the point spectrum (matched within 1e-12 in log
/// domain). Throws ValidationError when t is not an eigenvalue.
MaxVector eigvec_finite(const FiniteMaxMatrix& a, MaxScalar t);

/// s(A) = min_j max_i a_ij.
MaxScalar min_modulus(const FiniteMaxMatrix& a);

struct LowerRadiusEstimate {
  /// s(A^k)^(1/k) for k = 1..K.
  std::vector<MaxScalar> sequence;
  MaxScalar value;
};

LowerRadiusEstimate lower_spectral_radius(const FiniteMaxMatrix& a, std::size_t K);

/// chi(A)_j = r_{e_j}(A^T).
MaxVector cycle_time_vector(const FiniteMaxMatrix& a);

}  // namespace maxspec
