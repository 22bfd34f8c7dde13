#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxspec/matrix.hpp"

namespace maxspec {

class MatrixOracle;

/// Strongly connected classes in canonical block order (a class follows
/// every class it has an edge into) and the reduced digraph.
struct Condensation {
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;
  std::vector<bool> trivial;
  /// (mu, nu) with mu != nu and some a_kj > 0, k in class mu, j in class nu.
  /// Sorted, no duplicates.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

Condensation scc_condensation(const FiniteMaxMatrix& a);

struct Level {
  MaxScalar value;
  std::vector<std::size_t> indices;
};

struct BlockDecomposition {
  /// Row p of the permuted matrix is row permutation[p] of A.
  std::vector<std::size_t> permutation;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<MaxScalar> class_radii;
  std::vector<bool> trivial;
  std::vector<std::pair<std::size_t, std::size_t>> condensation_edges;
  /// Distinct local radii, strictly decreasing.
  std::vector<Level> levels;
};

/// Frobenius normal form: block lower triangular with irreducible diagonal
/// blocks, classes ordered as in scc_condensation.
BlockDecomposition fnf(const FiniteMaxMatrix& a);

/// Indices grouped by local radius, values strictly decreasing. Each level
/// is a union of whole classes.
std::vector<Level> level_decomposition(const FiniteMaxMatrix& a);

/// Permutation listing the levels in decreasing value order, classes inside
/// a level in canonical block order. The permuted matrix is block lower
/// triangular with respect to the levels.
std::vector<std::size_t> level_permutation(const FiniteMaxMatrix& a);

struct AccessRadius {
  MaxScalar value;
  /// Class attaining the maximum, absent when every accessing class is trivial.
  std::optional<std::size_t> class_index;
};

/// max { r(B_mu) : class mu accesses j } over the condensation DAG.
AccessRadius access_radius(const FiniteMaxMatrix& a, std::size_t j);
std::vector<MaxScalar> access_radii(const FiniteMaxMatrix& a);
std::vector<MaxScalar> access_radii(const SparseMaxMatrix& a);

struct BlockFormCheck {
  bool ok = true;
  /// First offending entry (i, j) of A above the diagonal blocks, or a node
  /// pair of a block that is not strongly connected.
  std::optional<std::pair<std::size_t, std::size_t>> violation;
  std::string message;
};

/// Checks that permuting A by the classes (in the given order) gives a block
/// lower triangular matrix with strongly connected diagonal blocks.
/// Throws ValidationError when the classes do not partition 0..n-1.
BlockFormCheck verify_block_form(const FiniteMaxMatrix& a, const std::vector<std::vector<std::size_t>>& classes);

struct WindowLevels {
  std::size_t window = 0;
  /// 1-based indices; values are lower bounds of the true level values.
  std::vector<Level> levels;
  /// First index of the symbolic tail block (window + 1).
  std::size_t tail_start = 1;
};

WindowLevels window_levels(const MatrixOracle& o, std::size_t N);

}  // namespace maxspec
