#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxspec/matrix.hpp"

namespace maxspec {

/// Structural metadata. All indices are 1-based. Every hint is a promise
/// about the full infinite matrix, so estimators may rely on it.
struct OracleHints {
  /// a_ij = 0 whenever j > i + upper_bandwidth.
  std::optional<std::size_t> upper_bandwidth;
  /// a_ij = 0 whenever i > j + lower_bandwidth.
  std::optional<std::size_t> lower_bandwidth;
  /// Ascending columns j <= limit that may be nonzero in row i; every other
  /// column of row i is zero.
  std::function<std::vector<std::size_t>(std::size_t i, std::size_t limit)> row_support;
  /// No cycles at all, so mu = 0.
  bool acyclic = false;
  std::optional<bool> irreducible;
  /// Certified upper bound of r(A) (dominator or closed form).
  std::optional<double> radius_upper;
  /// Certified sup of the entries of P_n A P_n.
  std::function<double(std::size_t n)> tail_norm;
};

/// A lazy infinite bounded nonnegative matrix. Entries are pure functions of
/// (i, j), 1-based.
class MatrixOracle {
 public:
  using EntryFn = std::function<double(std::size_t, std::size_t)>;

  MatrixOracle(std::string name, EntryFn entry, double norm_bound, OracleHints hints = {},
               nlohmann::json params = nlohmann::json::object());

  const std::string& name() const { return name_; }
  const nlohmann::json& params() const { return params_; }
  double norm_bound() const { return norm_bound_; }
  const OracleHints& hints() const { return hints_; }

  /// Raw probe; throws OracleViolation for negative, non-finite or
  /// out-of-bound values and ValidationError for index 0.
  double entry(std::size_t i, std::size_t j) const;
  MaxScalar at(std::size_t i, std::size_t j) const { return MaxScalar::from_linear(entry(i, j)); }

  /// Columns in [lo, hi] that may be nonzero in row i: the hinted support
  /// or band when known, otherwise the whole range.
  std::vector<std::size_t> candidate_columns(std::size_t i, std::size_t lo, std::size_t hi) const;
  /// True when rows can be realized without scanning every column.
  bool has_structure() const;

  struct Cache;
  std::shared_ptr<Cache> cache() const { return cache_; }

 private:
  std::string name_;
  EntryFn entry_;
  double norm_bound_;
  OracleHints hints_;
  nlohmann::json params_;
  std::shared_ptr<Cache> cache_;
};

using OraclePtr = std::shared_ptr<const MatrixOracle>;

/// Realization of rows/columns offset+1..end of an oracle.
class Truncation {
 public:
  enum class Kind { leading, tail };

  Truncation(Kind kind, std::size_t offset, std::size_t end, SparseMaxMatrix m);

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }
  std::size_t end() const { return end_; }
  std::size_t dim() const { return end_ - offset_; }
  const SparseMaxMatrix& sparse() const { return sparse_; }
  /// Dense copy, built once on first use.
  const FiniteMaxMatrix& dense() const;

 private:
  Kind kind_;
  std::size_t offset_;
  std::size_t end_;
  SparseMaxMatrix sparse_;
  mutable std::once_flag dense_once_;
  mutable std::unique_ptr<FiniteMaxMatrix> dense_;
};

using TruncationPtr = std::shared_ptr<const Truncation>;

/// Largest window realized by a full scan when the oracle has no structure
/// hints.
inline constexpr std::size_t kMaxUnstructuredWindow = 4096;
/// Largest window overall.
inline constexpr std::size_t kMaxWindow = 1u << 20;

/// Leading N x N window. Results are cached per oracle; concurrent calls are
/// safe and return the same realization.
TruncationPtr truncate(const MatrixOracle& o, std::size_t N);
/// Rows and columns n+1..N (P_n A P_n restricted to the window), N > n.
TruncationPtr tail_truncate(const MatrixOracle& o, std::size_t n, std::size_t N);

/// c * A.
OraclePtr scaled(const OraclePtr& o, double c);
/// A^T.
OraclePtr transposed(const OraclePtr& o);

/// Finite matrix with zero extension.
OraclePtr table_oracle(const FiniteMaxMatrix& a, std::string name = "table");

/// Custom oracle from JSON: {"kind": "table" | "banded" | "sparse_rule", ...}.
/// Throws ValidationError on malformed input.
OraclePtr oracle_from_json(const nlohmann::json& spec);

}  // namespace maxspec
