#pragma once

#include <cstddef>
#include <vector>

#include "maxspec/matrix.hpp"

namespace maxspec {

/// Strongly connected components of the digraph with edge i -> j iff
/// a_ij > 0. Classes are listed in canonical block order: a class appears
/// after every class it has an edge into, ties broken by the smallest
/// original index. Each class is sorted ascending.
struct Components {
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;
  /// A class is trivial when it is a single node without a self-loop.
  std::vector<bool> trivial;
};

Components strong_components(const SparseMaxMatrix& a);

/// Nodes i with a directed path i -> ... -> target (target included),
/// ascending.
std::vector<std::size_t> ancestors(const SparseMaxMatrix& a, std::size_t target);

}  // namespace maxspec
