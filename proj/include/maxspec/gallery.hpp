#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "maxspec/oracle.hpp"

namespace maxspec {

struct KnownValue {
  std::optional<double> value;
  /// Symbolic form when there is no number ("empty", "k^(-1/k)").
  std::string text;
  std::string justification;
};

/// Diagonal enumeration of the double-indexed basis e_{i,j}, 1 <= j <= n_i:
/// pairs are ordered by i + j, then by i.
struct HolderLayout {
  double alpha = 1;
  /// block_size[i] = n_i for i >= 1 (index 0 unused).
  std::vector<std::size_t> block_size;
  /// Flat index p (1-based) -> (i, j); pairs[0] unused.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> flat;

  std::size_t size() const { return pairs.size() - 1; }
  /// Flat index of (i, j), or nullopt beyond the enumerated prefix.
  std::optional<std::size_t> index_of(std::size_t i, std::size_t j) const;
};

struct GalleryEntry {
  OraclePtr oracle;
  /// Keys: r, mu, r_prime, r_ess, m, m_e, sigma_p.
  std::map<std::string, KnownValue> known;
  /// Known r_{e_j} when available.
  std::function<std::optional<double>(std::size_t j)> local_radius;
  std::string description;
  std::optional<HolderLayout> layout;

  std::optional<double> known_value(const std::string& key) const;
};

struct GalleryInfo {
  std::string name;
  std::string parameters;
  std::string description;
};

std::vector<GalleryInfo> gallery_list();

/// Builds a registry entry. params is a JSON object of numbers; unknown
/// names or invalid parameters throw ValidationError.
GalleryEntry gallery(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

/// w_k = 2^-j for k = 2^j * l, l odd.
double kakutani_weight(std::size_t k);

/// Smallest n with (1 + 1/k)^((n-1)/n) * k^(-2/(alpha n)) > 1 + 1/(2k), k >= 2;
/// n_1 = 1. Found by doubling then bisection; throws ResourceLimit past 2^40.
std::size_t holder_block_size(double alpha, std::size_t k);
bool holder_inequality(double alpha, std::size_t k, std::size_t n);

/// Layout with the first `count` flat indices.
HolderLayout holder_layout(double alpha, std::size_t count = 32768);

/// Exact r of the single cycle of block i in B_k:
/// ((1 + 1/i)^(n_i - 1) * k^(-2/alpha))^(1/n_i).
double holder_block_mean(double alpha, std::size_t i, std::size_t k);

}  // namespace maxspec
