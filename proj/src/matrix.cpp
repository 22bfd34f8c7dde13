#include "maxspec/matrix.hpp"

#include <algorithm>

#include "maxspec/errors.hpp"

namespace maxspec {

MaxVector MaxVector::basis(std::size_t n, std::size_t j) {
  if (j >= n) throw ValidationError("basis index out of range");
  MaxVector e(n);
  e[j] = MaxScalar::one();
  return e;
}

MaxVector MaxVector::ones(std::size_t n) {
  return MaxVector(std::vector<MaxScalar>(n, MaxScalar::one()));
}

MaxVector MaxVector::from_linear(std::span<const double> values) {
  MaxVector x(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) x[i] = MaxScalar::from_linear(values[i]);
  return x;
}

std::vector<double> MaxVector::to_linear() const {
  std::vector<double> out;
  out.reserve(v_.size());
  for (const auto& s : v_) out.push_back(s.value());
  return out;
}

FiniteMaxMatrix::FiniteMaxMatrix(std::size_t n) : n_(n), a_(n * n) {
  if (n == 0) throw ValidationError("matrix dimension must be at least 1");
}

FiniteMaxMatrix FiniteMaxMatrix::identity(std::size_t n) {
  FiniteMaxMatrix id(n);
  for (std::size_t i = 0; i < n; ++i) id(i, i) = MaxScalar::one();
  return id;
}

FiniteMaxMatrix FiniteMaxMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  FiniteMaxMatrix a(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ValidationError("matrix rows must form a square array");
    for (std::size_t j = 0; j < rows.size(); ++j) a(i, j) = MaxScalar::from_linear(rows[i][j]);
  }
  return a;
}

MaxScalar FiniteMaxMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw ValidationError("matrix index out of range");
  return (*this)(i, j);
}

FiniteMaxMatrix FiniteMaxMatrix::transpose() const {
  FiniteMaxMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

FiniteMaxMatrix FiniteMaxMatrix::scaled(MaxScalar c) const {
  FiniteMaxMatrix s = *this;
  for (auto& x : s.a_) x *= c;
  return s;
}

FiniteMaxMatrix FiniteMaxMatrix::principal_submatrix(std::span<const std::size_t> indices) const {
  FiniteMaxMatrix s(indices.size());
  for (std::size_t p = 0; p < indices.size(); ++p)
    for (std::size_t q = 0; q < indices.size(); ++q) s(p, q) = at(indices[p], indices[q]);
  return s;
}

FiniteMaxMatrix FiniteMaxMatrix::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != n_) throw ValidationError("permutation length differs from dimension");
  std::vector<bool> seen(n_, false);
  for (auto p : perm) {
    if (p >= n_ || seen[p]) throw ValidationError("not a permutation");
    seen[p] = true;
  }
  return principal_submatrix(perm);
}

std::vector<std::vector<double>> FiniteMaxMatrix::to_linear() const {
  std::vector<std::vector<double>> rows(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) rows[i][j] = (*this)(i, j).value();
  return rows;
}

SparseMaxMatrix::SparseMaxMatrix(
    std::size_t n, std::vector<std::pair<std::pair<std::size_t, std::size_t>, MaxScalar>> triplets)
    : n_(n) {
  std::sort(triplets.begin(), triplets.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  offsets_.assign(n + 1, 0);
  for (std::size_t t = 0; t < triplets.size(); ++t) {
    const auto [i, j] = triplets[t].first;
    if (i >= n || j >= n) throw ValidationError("sparse entry index out of range");
    if (t > 0 && triplets[t - 1].first == triplets[t].first) {
      throw ValidationError("duplicate sparse entry");
    }
    if (triplets[t].second.is_zero()) continue;
    cols_.push_back({j, triplets[t].second});
    ++offsets_[i + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
}

SparseMaxMatrix::SparseMaxMatrix(const FiniteMaxMatrix& dense) : n_(dense.dim()) {
  offsets_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (!dense(i, j).is_zero()) cols_.push_back({j, dense(i, j)});
    }
    offsets_[i + 1] = cols_.size();
  }
}

MaxScalar SparseMaxMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw ValidationError("matrix index out of range");
  const auto r = row(i);
  const auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const Entry& e, std::size_t c) { return e.col < c; });
  if (it != r.end() && it->col == j) return it->value;
  return MaxScalar::zero();
}

SparseMaxMatrix SparseMaxMatrix::transpose() const {
  SparseMaxMatrix t;
  t.n_ = n_;
  t.offsets_.assign(n_ + 1, 0);
  for (const auto& e : cols_) ++t.offsets_[e.col + 1];
  for (std::size_t i = 0; i < n_; ++i) t.offsets_[i + 1] += t.offsets_[i];
  t.cols_.resize(cols_.size());
  std::vector<std::size_t> fill(t.offsets_.begin(), t.offsets_.end() - 1);
  // Rows visited in ascending order keep each transposed row sorted.
  for (std::size_t i = 0; i < n_; ++i)
    for (const auto& e : row(i)) t.cols_[fill[e.col]++] = {i, e.value};
  return t;
}

SparseMaxMatrix SparseMaxMatrix::principal_submatrix(std::span<const std::size_t> indices) const {
  constexpr auto kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> local(n_, kAbsent);
  for (std::size_t p = 0; p < indices.size(); ++p) {
    if (indices[p] >= n_) throw ValidationError("submatrix index out of range");
    local[indices[p]] = p;
  }
  SparseMaxMatrix s;
  s.n_ = indices.size();
  s.offsets_.assign(s.n_ + 1, 0);
  for (std::size_t p = 0; p < indices.size(); ++p) {
    const std::size_t start = s.cols_.size();
    for (const auto& e : row(indices[p])) {
      if (local[e.col] != kAbsent) s.cols_.push_back({local[e.col], e.value});
    }
    std::sort(s.cols_.begin() + static_cast<std::ptrdiff_t>(start), s.cols_.end(),
              [](const Entry& x, const Entry& y) { return x.col < y.col; });
    s.offsets_[p + 1] = s.cols_.size();
  }
  return s;
}

FiniteMaxMatrix SparseMaxMatrix::to_dense() const {
  FiniteMaxMatrix d(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (const auto& e : row(i)) d(i, e.col) = e.value;
  return d;
}

MaxScalar SparseMaxMatrix::norm() const {
  MaxScalar best;
  for (const auto& e : cols_) best = oplus(best, e.value);
  return best;
}

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw ValidationError("dimension mismatch");
}

}  // namespace

FiniteMaxMatrix oplus(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b) {
  require_same_dim(a.dim(), b.dim());
  FiniteMaxMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = oplus(a(i, j), b(i, j));
  return c;
}

FiniteMaxMatrix otimes(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b) {
  require_same_dim(a.dim(), b.dim());
  const std::size_t n = a.dim();
  FiniteMaxMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const MaxScalar aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) = oplus(c(i, j), aik * b(k, j));
    }
  }
  return c;
}

MaxVector mat_vec(const FiniteMaxMatrix& a, const MaxVector& x) {
  require_same_dim(a.dim(), x.size());
  MaxVector y(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) y[i] = oplus(y[i], a(i, j) * x[j]);
  return y;
}

MaxVector mat_vec(const SparseMaxMatrix& a, const MaxVector& x) {
  require_same_dim(a.dim(), x.size());
  MaxVector y(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (const auto& e : a.row(i)) y[i] = oplus(y[i], e.value * x[e.col]);
  return y;
}

MaxVector oplus(const MaxVector& a, const MaxVector& b) {
  require_same_dim(a.size(), b.size());
  MaxVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = oplus(a[i], b[i]);
  return c;
}

FiniteMaxMatrix power(const FiniteMaxMatrix& a, std::uint64_t k) {
  FiniteMaxMatrix result = FiniteMaxMatrix::identity(a.dim());
  FiniteMaxMatrix base = a;
  bool first = true;
  while (k > 0) {
    if (k & 1U) {
      result = first ? base : otimes(result, base);
      first = false;
    }
    k >>= 1U;
    if (k > 0) base = otimes(base, base);
  }
  return result;
}

MaxScalar norm(const FiniteMaxMatrix& a) {
  MaxScalar best;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) best = oplus(best, a(i, j));
  return best;
}

MaxScalar norm(const MaxVector& x) {
  MaxScalar best;
  for (const auto& v : x.entries()) best = oplus(best, v);
  return best;
}

MaxScalar distance(const FiniteMaxMatrix& a, const FiniteMaxMatrix& b) {
  require_same_dim(a.dim(), b.dim());
  MaxScalar best;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) best = oplus(best, abs_diff(a(i, j), b(i, j)));
  return best;
}

namespace {

template <class Matrix>
PathWitness path_weight_impl(const Matrix& a, std::span<const std::size_t> indices) {
  if (indices.empty()) throw ValidationError("path needs at least one index");
  for (auto i : indices) {
    if (i >= a.dim()) throw ValidationError("path index out of range");
  }
  PathWitness w{{indices.begin(), indices.end()}, MaxScalar::one()};
  for (std::size_t t = 0; t + 1 < indices.size(); ++t) w.weight *= a.at(indices[t + 1], indices[t]);
  return w;
}

}  // namespace

PathWitness path_weight(const FiniteMaxMatrix& a, std::span<const std::size_t> indices) {
  return path_weight_impl(a, indices);
}

PathWitness path_weight(const SparseMaxMatrix& a, std::span<const std::size_t> indices) {
  return path_weight_impl(a, indices);
}

std::vector<MaxScalar> pow_norms(const SparseMaxMatrix& a, std::size_t K) {
  std::vector<MaxScalar> out;
  out.reserve(K);
  MaxVector v = MaxVector::ones(a.dim());
  for (std::size_t k = 1; k <= K; ++k) {
    v = mat_vec(a, v);
    out.push_back(norm(v));
  }
  return out;
}

std::vector<MaxScalar> pow_norm_seq(const SparseMaxMatrix& a, std::size_t K) {
  if (K == 0) throw ValidationError("pow_norm_seq needs K >= 1");
  auto out = pow_norms(a, K);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = out[k].root(k + 1);
  return out;
}

std::vector<MaxScalar> pow_norm_seq(const FiniteMaxMatrix& a, std::size_t K) {
  return pow_norm_seq(SparseMaxMatrix(a), K);
}

}  // namespace maxspec
