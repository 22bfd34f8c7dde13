#include "maxspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

#include "maxspec/errors.hpp"
#include "maxspec/io.hpp"

namespace maxspec {

struct MatrixOracle::Cache {
  static constexpr std::size_t kCapacity = 32;
  std::mutex mutex;
  std::map<std::pair<std::size_t, std::size_t>, TruncationPtr> windows;
  std::deque<std::pair<std::size_t, std::size_t>> order;
};

MatrixOracle::MatrixOracle(std::string name, EntryFn entry, double norm_bound, OracleHints hints,
                           nlohmann::json params)
    : name_(std::move(name)),
      entry_(std::move(entry)),
      norm_bound_(norm_bound),
      hints_(std::move(hints)),
      params_(std::move(params)),
      cache_(std::make_shared<Cache>()) {
  if (!entry_) throw ValidationError("oracle needs an entry function");
  if (!std::isfinite(norm_bound_) || norm_bound_ < 0) throw ValidationError("oracle norm bound must be finite and >= 0");
}

double MatrixOracle::entry(std::size_t i, std::size_t j) const {
  if (i == 0 || j == 0) throw ValidationError("oracle indices are 1-based");
  const double v = entry_(i, j);
  if (!std::isfinite(v) || v < 0)
    throw OracleViolation(name_ + ": entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not a finite nonnegative number");
  if (v > norm_bound_)
    throw OracleViolation(name_ + ": entry (" + std::to_string(i) + "," + std::to_string(j) + ") exceeds the norm bound");
  return v;
}

bool MatrixOracle::has_structure() const {
  return static_cast<bool>(hints_.row_support) || (hints_.upper_bandwidth && hints_.lower_bandwidth);
}

std::vector<std::size_t> MatrixOracle::candidate_columns(std::size_t i, std::size_t lo, std::size_t hi) const {
  std::vector<std::size_t> out;
  if (lo > hi) return out;
  if (hints_.row_support) {
    for (auto j : hints_.row_support(i, hi))
      if (j >= lo && j <= hi) out.push_back(j);
    return out;
  }
  std::size_t a = lo, b = hi;
  if (hints_.lower_bandwidth && i > *hints_.lower_bandwidth) a = std::max(a, i - *hints_.lower_bandwidth);
  if (hints_.upper_bandwidth) b = std::min(b, i + *hints_.upper_bandwidth);
  for (std::size_t j = a; j <= b; ++j) out.push_back(j);
  return out;
}

Truncation::Truncation(Kind kind, std::size_t offset, std::size_t end, SparseMaxMatrix m)
    : kind_(kind), offset_(offset), end_(end), sparse_(std::move(m)) {}

const FiniteMaxMatrix& Truncation::dense() const {
  std::call_once(dense_once_, [this] { dense_ = std::make_unique<FiniteMaxMatrix>(sparse_.to_dense()); });
  return *dense_;
}

namespace {

TruncationPtr realize(const MatrixOracle& o, Truncation::Kind kind, std::size_t offset, std::size_t end) {
  const auto key = std::make_pair(offset, end);
  const auto cache = o.cache();
  {
    std::lock_guard lock(cache->mutex);
    if (const auto it = cache->windows.find(key); it != cache->windows.end()) return it->second;
  }

  const std::size_t dim = end - offset;
  if (dim > kMaxWindow) throw ResourceLimit("window larger than " + std::to_string(kMaxWindow));
  if (!o.has_structure() && dim > kMaxUnstructuredWindow)
    throw ResourceLimit(o.name() + ": window above " + std::to_string(kMaxUnstructuredWindow) +
                        " needs band or row-support hints");

  std::vector<std::pair<std::pair<std::size_t, std::size_t>, MaxScalar>> triplets;
  for (std::size_t i = offset + 1; i <= end; ++i) {
    for (auto j : o.candidate_columns(i, offset + 1, end)) {
      const MaxScalar v = o.at(i, j);
      if (!v.is_zero()) triplets.push_back({{i - offset - 1, j - offset - 1}, v});
    }
  }
  auto t = std::make_shared<const Truncation>(kind, offset, end, SparseMaxMatrix(dim, std::move(triplets)));

  std::lock_guard lock(cache->mutex);
  if (const auto it = cache->windows.find(key); it != cache->windows.end()) return it->second;
  cache->windows.emplace(key, t);
  cache->order.push_back(key);
  if (cache->order.size() > MatrixOracle::Cache::kCapacity) {
    cache->windows.erase(cache->order.front());
    cache->order.pop_front();
  }
  return t;
}

}  // namespace

TruncationPtr truncate(const MatrixOracle& o, std::size_t N) {
  if (N == 0) throw ValidationError("window size must be at least 1");
  return realize(o, Truncation::Kind::leading, 0, N);
}

TruncationPtr tail_truncate(const MatrixOracle& o, std::size_t n, std::size_t N) {
  if (N <= n) throw ValidationError("tail window needs N > n");
  return realize(o, Truncation::Kind::tail, n, N);
}

OraclePtr scaled(const OraclePtr& o, double c) {
  if (!std::isfinite(c) || c < 0) throw ValidationError("scale factor must be finite and >= 0");
  OracleHints h = o->hints();
  if (h.radius_upper) h.radius_upper = *h.radius_upper * c;
  if (h.tail_norm) h.tail_norm = [f = h.tail_norm, c](std::size_t n) { return f(n) * c; };
  if (c == 0) h.acyclic = true;
  nlohmann::json params = {{"base", o->name()}, {"base_params", o->params()}, {"c", c}};
  return std::make_shared<MatrixOracle>(
      "scaled", [o, c](std::size_t i, std::size_t j) { return c * o->entry(i, j); }, c * o->norm_bound(),
      std::move(h), std::move(params));
}

OraclePtr transposed(const OraclePtr& o) {
  const OracleHints& src = o->hints();
  OracleHints h;
  h.upper_bandwidth = src.lower_bandwidth;
  h.lower_bandwidth = src.upper_bandwidth;
  h.acyclic = src.acyclic;
  h.irreducible = src.irreducible;
  h.tail_norm = src.tail_norm;
  nlohmann::json params = {{"base", o->name()}, {"base_params", o->params()}};
  return std::make_shared<MatrixOracle>(
      "transposed", [o](std::size_t i, std::size_t j) { return o->entry(j, i); }, o->norm_bound(), std::move(h),
      std::move(params));
}

OraclePtr table_oracle(const FiniteMaxMatrix& a, std::string name) {
  const std::size_t n = a.dim();
  auto rows = std::make_shared<std::vector<std::vector<std::pair<std::size_t, double>>>>(n);
  double norm_value = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!a(i, j).is_zero()) {
        (*rows)[i].push_back({j + 1, a(i, j).value()});
        norm_value = std::max(norm_value, a(i, j).value());
      }
  OracleHints h;
  h.row_support = [rows, n](std::size_t i, std::size_t limit) {
    std::vector<std::size_t> out;
    if (i > n) return out;
    for (const auto& [j, v] : (*rows)[i - 1])
      if (j <= limit) out.push_back(j);
    return out;
  };
  h.tail_norm = [rows, n](std::size_t m) {
    double best = 0;
    for (std::size_t i = m; i < n; ++i)
      for (const auto& [j, v] : (*rows)[i])
        if (j > m) best = std::max(best, v);
    return best;
  };
  auto entry = [rows, n](std::size_t i, std::size_t j) {
    if (i > n) return 0.0;
    for (const auto& [c, v] : (*rows)[i - 1])
      if (c == j) return v;
    return 0.0;
  };
  return std::make_shared<MatrixOracle>(std::move(name), entry, norm_value, std::move(h),
                                        nlohmann::json{{"n", n}});
}

namespace {

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ValidationError(std::string("missing numeric field '") + key + "'");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw ValidationError(std::string("field '") + key + "' must be finite");
  return v;
}

std::size_t require_index(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 1)
    throw ValidationError(std::string("field '") + key + "' must be a positive integer");
  return j.at(key).get<std::size_t>();
}

double require_nonneg(const nlohmann::json& j, const char* key) {
  const double v = require_number(j, key);
  if (v < 0) throw ValidationError(std::string("field '") + key + "' must be nonnegative");
  return v;
}

struct Band {
  long offset;
  std::vector<double> values;
  bool repeat;
};

OraclePtr banded_from_json(const nlohmann::json& spec) {
  const double bound = require_nonneg(spec, "norm_bound");
  if (!spec.contains("bands") || !spec["bands"].is_array() || spec["bands"].empty())
    throw ValidationError("banded oracle needs a nonempty 'bands' array");
  auto bands = std::make_shared<std::vector<Band>>();
  std::size_t upper = 0, lower = 0;
  for (const auto& b : spec["bands"]) {
    if (!b.contains("offset") || !b["offset"].is_number_integer()) throw ValidationError("band needs an integer 'offset'");
    Band band{b["offset"].get<long>(), {}, false};
    if (b.contains("value")) {
      band.values = {require_nonneg(b, "value")};
      band.repeat = true;
    } else if (b.contains("values") && b["values"].is_array() && !b["values"].empty()) {
      for (const auto& v : b["values"]) {
        if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() < 0)
          throw ValidationError("band values must be finite nonnegative numbers");
        band.values.push_back(v.get<double>());
      }
      band.repeat = b.value("repeat", false);
    } else {
      throw ValidationError("band needs 'value' or a nonempty 'values' array");
    }
    if (band.offset >= 0) upper = std::max(upper, static_cast<std::size_t>(band.offset));
    else lower = std::max(lower, static_cast<std::size_t>(-band.offset));
    bands->push_back(std::move(band));
  }
  OracleHints h;
  h.upper_bandwidth = upper;
  h.lower_bandwidth = lower;
  auto entry = [bands](std::size_t i, std::size_t j) {
    double best = 0;
    const long d = static_cast<long>(j) - static_cast<long>(i);
    for (const auto& b : *bands) {
      if (b.offset != d) continue;
      // position along the band, 0-based from its first entry
      const std::size_t p = std::min(i, j) - 1;
      if (p < b.values.size()) best = std::max(best, b.values[p]);
      else if (b.repeat) best = std::max(best, b.values[p % b.values.size()]);
    }
    return best;
  };
  return std::make_shared<MatrixOracle>(spec.value("name", std::string("banded")), entry, bound, std::move(h), spec);
}

struct Rule {
  enum Kind { single, row_geometric, col_geometric } kind;
  std::size_t row, col;
  double value, ratio;
};

OraclePtr sparse_rule_from_json(const nlohmann::json& spec) {
  const double bound = require_nonneg(spec, "norm_bound");
  if (!spec.contains("rules") || !spec["rules"].is_array()) throw ValidationError("sparse_rule oracle needs a 'rules' array");
  auto rules = std::make_shared<std::vector<Rule>>();
  for (const auto& r : spec["rules"]) {
    const double v = require_nonneg(r, "value");
    if (r.contains("col_from")) {
      const double q = require_nonneg(r, "ratio");
      if (q > 1) throw ValidationError("geometric rule ratio must be <= 1 to stay bounded");
      rules->push_back({Rule::row_geometric, require_index(r, "row"), require_index(r, "col_from"), v, q});
    } else if (r.contains("row_from")) {
      const double q = require_nonneg(r, "ratio");
      if (q > 1) throw ValidationError("geometric rule ratio must be <= 1 to stay bounded");
      rules->push_back({Rule::col_geometric, require_index(r, "row_from"), require_index(r, "col"), v, q});
    } else {
      rules->push_back({Rule::single, require_index(r, "row"), require_index(r, "col"), v, 0});
    }
  }
  auto entry = [rules](std::size_t i, std::size_t j) {
    double best = 0;
    for (const auto& r : *rules) {
      switch (r.kind) {
        case Rule::single:
          if (i == r.row && j == r.col) best = std::max(best, r.value);
          break;
        case Rule::row_geometric:
          if (i == r.row && j >= r.col) best = std::max(best, r.value * std::pow(r.ratio, static_cast<double>(j - r.col)));
          break;
        case Rule::col_geometric:
          if (j == r.col && i >= r.row) best = std::max(best, r.value * std::pow(r.ratio, static_cast<double>(i - r.row)));
          break;
      }
    }
    return best;
  };
  OracleHints h;
  h.row_support = [rules](std::size_t i, std::size_t limit) {
    std::vector<std::size_t> out;
    for (const auto& r : *rules) {
      switch (r.kind) {
        case Rule::single:
          if (i == r.row && r.col <= limit) out.push_back(r.col);
          break;
        case Rule::row_geometric:
          if (i == r.row)
            for (std::size_t j = r.col; j <= limit; ++j) out.push_back(j);
          break;
        case Rule::col_geometric:
          if (i >= r.row && r.col <= limit) out.push_back(r.col);
          break;
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  return std::make_shared<MatrixOracle>(spec.value("name", std::string("sparse_rule")), entry, bound, std::move(h), spec);
}

}  // namespace

OraclePtr oracle_from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
    throw ValidationError("oracle spec needs a string 'kind'");
  const auto kind = spec["kind"].get<std::string>();
  if (kind == "table") {
    const auto& m = spec.contains("matrix") ? spec["matrix"] : spec;
    return table_oracle(matrix_from_json(m), spec.value("name", std::string("table")));
  }
  if (kind == "banded") return banded_from_json(spec);
  if (kind == "sparse_rule") return sparse_rule_from_json(spec);
  throw ValidationError("unknown oracle kind '" + kind + "'");
}

}  // namespace maxspec
