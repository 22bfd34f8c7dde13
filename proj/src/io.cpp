#include "maxspec/io.hpp"

#include <cmath>
#include <set>

#include "maxspec/errors.hpp"

namespace maxspec {

namespace {

double entry_value(const nlohmann::json& v) {
  if (!v.is_number()) throw ValidationError("matrix entries must be numbers");
  const double x = v.get<double>();
  if (!std::isfinite(x) || x < 0) throw ValidationError("matrix entries must be finite and nonnegative");
  return x;
}

}  // namespace

FiniteMaxMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    throw ValidationError("matrix JSON needs a positive integer 'n'");
  const auto n = j["n"].get<std::size_t>();
  FiniteMaxMatrix a(n);
  const bool dense = j.contains("entries");
  const bool sparse = j.contains("triplets");
  if (dense == sparse) throw ValidationError("matrix JSON needs exactly one of 'entries' or 'triplets'");
  if (dense) {
    const auto& rows = j["entries"];
    if (!rows.is_array() || rows.size() != n) throw ValidationError("'entries' must have n rows");
    for (std::size_t r = 0; r < n; ++r) {
      if (!rows[r].is_array() || rows[r].size() != n) throw ValidationError("every row of 'entries' must have n values");
      for (std::size_t c = 0; c < n; ++c) a(r, c) = MaxScalar::from_linear(entry_value(rows[r][c]));
    }
    return a;
  }
  const auto& trip = j["triplets"];
  if (!trip.is_array()) throw ValidationError("'triplets' must be an array");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& t : trip) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer())
      throw ValidationError("triplet must be [i, j, value] with integer indices");
    const long long i = t[0].get<long long>(), c = t[1].get<long long>();
    if (i < 1 || c < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(c) > n)
      throw ValidationError("triplet index out of range (indices are 1-based)");
    if (!seen.emplace(i, c).second)
      throw ValidationError("duplicate triplet (" + std::to_string(i) + "," + std::to_string(c) + ")");
    a(i - 1, c - 1) = MaxScalar::from_linear(entry_value(t[2]));
  }
  return a;
}

nlohmann::json matrix_to_json(const FiniteMaxMatrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(a(i, j).value());
    rows.push_back(std::move(row));
  }
  return {{"n", a.dim()}, {"entries", std::move(rows)}};
}

nlohmann::json scalar_to_json(MaxScalar x) {
  if (x.is_zero()) return 0.0;
  const double v = x.value();
  if (v == 0.0 || !std::isfinite(v)) return {{"log2", x.log2()}};
  return v;
}

nlohmann::json vector_to_json(const MaxVector& x) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : x.entries()) out.push_back(scalar_to_json(s));
  return out;
}

}  // namespace maxspec
