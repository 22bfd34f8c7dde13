#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "maxspec/scalar.hpp"

namespace maxspec {

/// Nonnegative vector in the max-times semiring.
class MaxVector {
 public:
  MaxVector() = default;
  explicit MaxVector(std::size_t n) : v_(n) {}
  explicit MaxVector(std::vector<MaxScalar> v) : v_(std::move(v)) {}

  static MaxVector basis(std::size_t n, std::size_t j);
  static MaxVector ones(std::size_t n);
  static MaxVector from_linear(std::span<const double> values);

  std::size_t size() const { return v_.size(); }
  const MaxScalar& operator[](std::size_t i) const { return v_[i]; }
  MaxScalar& operator[](std::size_t i) { return v_[i]; }
  std::span<const MaxScalar> entries() const { return v_; }
  std::vector<double> to_linear() const;

  friend bool operator==(const MaxVector&, const MaxVector&) = default;

 private:
  std::vector<MaxScalar> v_;
};

/// Dense n x n nonnegative matrix, row-major, 0-based.
class FiniteMaxMatrix {
 public:
  FiniteMaxMatrix() = default;
  /// The n x n zero matrix; n >= 1.
  explicit FiniteMaxMatrix(std::size_t n);

  static FiniteMaxMatrix identity(std::size_t n);
  /// Square rows of nonnegative finite doubles.
  static FiniteMaxMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const { return n_; }
  const MaxScalar& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  MaxScalar& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  /// Bounds-checked read; throws ValidationError.
  MaxScalar at(std::size_t i, std::size_t j) const;

  FiniteMaxMatrix transpose() const;
  FiniteMaxMatrix scaled(MaxScalar c) const;
  /// Rows and columns restricted to `indices` (kept in the given order).
  FiniteMaxMatrix principal_submatrix(std::span<const std::size_t> indices) const;
  /// P A P^T where row p of the result is row perm[p] of A.
  FiniteMaxMatrix permuted(std::span<const std::size_t> perm) const;
  std::vector<std::vector<double>> to_linear() const;

  friend bool operator==(const FiniteMaxMatrix&, const FiniteMaxMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<MaxScalar> a_;
};

/// Compressed-row nonnegative matrix holding only positive entries.
/// Row lists are sorted by column.
class SparseMaxMatrix {
 public:
  struct Entry {
    std::size_t col;
    MaxScalar value;
  };

  SparseMaxMatrix() = default;
  /// Triplets (row, col, value) with 0-based indices; zeros are dropped and
  /// duplicates rejected.
  SparseMaxMatrix(std::size_t n, std::vector<std::pair<std::pair<std::size_t, std::size_t>, MaxScalar>> triplets);
  explicit SparseMaxMatrix(const FiniteMaxMatrix& dense);

  std::size_t dim() const { return n_; }
  std::size_t nonzeros() const { return cols_.size(); }
  std::span<const Entry> row(std::size_t i) const {
    return {cols_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  MaxScalar at(std::size_t i, std::size_t j) const;
  SparseMaxMatrix transpose() const;
  SparseMaxMatrix principal_submatrix(std::span<const std::size_t> indices) const;
  FiniteMaxMatrix to_dense() const;
  MaxScalar norm() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Entry> cols_;
};

/// Index sequence i_0..i_k with weight prod_t a(i_{t+1}, i_t).
struct PathWitness {
  std::vector<std::size_t> indices;
  MaxScalar weight;
};

FiniteMaxMatrix oplus(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b);
FiniteMaxMatrix otimes(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b);
MaxVector mat_vec(const FiniteMaxMatrix& a, const MaxVector& x);
MaxVector mat_vec(const SparseMaxMatrix& a, const MaxVector& x);
MaxVector oplus(const MaxVector& a, const MaxVector& b);
/// k-th max power by repeated squaring; k = 0 gives the identity.
FiniteMaxMatrix power(const FiniteMaxMatrix& a, std::uint64_t k);
MaxScalar norm(const FiniteMaxMatrix& a);
MaxScalar norm(const MaxVector& x);
/// sup-metric distance max |a_ij - b_ij|.
MaxScalar distance(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b);
PathWitness path_weight(const FiniteMaxMatrix& a, std::span<const std::size_t> indices);
PathWitness path_weight(const SparseMaxMatrix& a, std::span<const std::size_t> indices);

/// ||A^k||^(1/k) for k = 1..K, using ||A^k|| = ||A^k (x) 1||.
std::vector<MaxScalar> pow_norm_seq(const FiniteMaxMatrix& a, std::size_t K);
std::vector<MaxScalar> pow_norm_seq(const SparseMaxMatrix& a, std::size_t K);
/// ||A^k|| for k = 1..K (no root).
std::vector<MaxScalar> pow_norms(const SparseMaxMatrix& a, std::size_t K);

}  // namespace maxspec
