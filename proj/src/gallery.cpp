#include "maxspec/gallery.hpp"

#include <bit>
#include <cmath>
#include <memory>

#include "maxspec/errors.hpp"

namespace maxspec {

std::optional<std::size_t> HolderLayout::index_of(std::size_t i, std::size_t j) const {
  const auto it = flat.find({i, j});
  if (it == flat.end()) return std::nullopt;
  return it->second;
}

std::optional<double> GalleryEntry::known_value(const std::string& key) const {
  const auto it = known.find(key);
  if (it == known.end()) return std::nullopt;
  return it->second.value;
}

double kakutani_weight(std::size_t k) {
  if (k == 0) throw ValidationError("kakutani weights start at k = 1");
  return std::ldexp(1.0, -std::countr_zero(k));
}

bool holder_inequality(double alpha, std::size_t k, std::size_t n) {
  const double kd = static_cast<double>(k), nd = static_cast<double>(n);
  const double lhs = (nd - 1) / nd * std::log1p(1 / kd) - 2 * std::log(kd) / (alpha * nd);
  return lhs > std::log1p(1 / (2 * kd));
}

std::size_t holder_block_size(double alpha, std::size_t k) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
  if (k == 0) throw ValidationError("holder block index starts at 1");
  if (k == 1) return 1;
  std::size_t hi = 1;
  while (!holder_inequality(alpha, k, hi)) {
    if (hi >= (std::size_t{1} << 40)) throw ResourceLimit("n_k search overflow");
    hi *= 2;
  }
  std::size_t lo = hi / 2;  // fails (or is 0)
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (holder_inequality(alpha, k, mid) ? hi : lo) = mid;
  }
  return hi;
}

HolderLayout holder_layout(double alpha, std::size_t count) {
  HolderLayout out;
  out.alpha = alpha;
  out.block_size = {0};
  out.pairs = {{0, 0}};
  auto n_of = [&](std::size_t i) {
    while (out.block_size.size() <= i) out.block_size.push_back(holder_block_size(alpha, out.block_size.size()));
    return out.block_size[i];
  };
  for (std::size_t d = 2; out.size() < count; ++d) {
    for (std::size_t i = 1; i < d && out.size() < count; ++i) {
      const std::size_t j = d - i;
      if (j > n_of(i)) continue;
      out.flat[{i, j}] = out.pairs.size();
      out.pairs.emplace_back(i, j);
    }
  }
  return out;
}

double holder_block_mean(double alpha, std::size_t i, std::size_t k) {
  const auto n = static_cast<double>(holder_block_size(alpha, i));
  const double log_w = (n - 1) * std::log1p(1 / static_cast<double>(i)) - 2 * std::log(static_cast<double>(k)) / alpha;
  return std::exp(log_w / n);
}

namespace {

using Params = nlohmann::json;

double param(const Params& p, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!p.is_object() || !p.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(std::string("missing parameter '") + key + "'");
  }
  const auto& v = p.at(key);
  double x = 0;
  if (v.is_number()) x = v.get<double>();
  else if (v.is_string()) {
    try {
      std::size_t used = 0;
      x = std::stod(v.get<std::string>(), &used);
      if (used != v.get<std::string>().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError(std::string("parameter '") + key + "' is not a number");
    }
  } else {
    throw ValidationError(std::string("parameter '") + key + "' is not a number");
  }
  if (!std::isfinite(x)) throw ValidationError(std::string("parameter '") + key + "' must be finite");
  return x;
}

std::size_t int_param(const Params& p, const char* key, std::size_t min_value, std::optional<double> fallback = std::nullopt) {
  const double x = param(p, key, fallback);
  if (x != std::floor(x) || x < static_cast<double>(min_value) || x > 1e15)
    throw ValidationError(std::string("parameter '") + key + "' must be an integer >= " + std::to_string(min_value));
  return static_cast<std::size_t>(x);
}

void check_keys(const Params& p, std::initializer_list<const char*> allowed) {
  if (p.is_null()) return;
  if (!p.is_object()) throw ValidationError("gallery parameters must be an object");
  for (const auto& [k, v] : p.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k == a;
    if (!ok) throw ValidationError("unknown gallery parameter '" + k + "'");
  }
}

KnownValue kv(double v, std::string why) { return {v, {}, std::move(why)}; }
KnownValue kt(std::string text, std::string why) { return {std::nullopt, std::move(text), std::move(why)}; }

std::vector<std::size_t> single(std::size_t j, std::size_t limit) {
  if (j >= 1 && j <= limit) return {j};
  return {};
}

OracleHints band_hints(std::size_t upper, std::size_t lower) {
  OracleHints h;
  h.upper_bandwidth = upper;
  h.lower_bandwidth = lower;
  return h;
}

GalleryEntry make(std::string name, MatrixOracle::EntryFn entry, double norm, OracleHints hints, Params params) {
  GalleryEntry g;
  g.oracle = std::make_shared<MatrixOracle>(std::move(name), std::move(entry), norm, std::move(hints), std::move(params));
  return g;
}

GalleryEntry backward_shift() {
  auto h = band_hints(1, 0);
  h.row_support = [](std::size_t i, std::size_t limit) { return single(i + 1, limit); };
  h.acyclic = true;
  h.irreducible = false;
  h.radius_upper = 1;
  h.tail_norm = [](std::size_t) { return 1.0; };
  auto g = make("backward_shift", [](std::size_t i, std::size_t j) { return j == i + 1 ? 1.0 : 0.0; }, 1, std::move(h), Params::object());
  g.description = "a_{i,i+1} = 1";
  g.known = {
      {"mu", kv(0, "no cycles")},
      {"m", kv(0, "A^k e_j = e_{j-k} vanishes for k >= j")},
      {"r", kv(1, "||A^k|| = 1 for every k")},
      {"r_prime", kv(1, "r = max(mu, r') with mu = 0")},
      {"r_ess", kv(1, "r = max(r_ess, mu) with mu = 0")},
      {"m_e", kv(0, "every local radius is 0")},
  };
  g.local_radius = [](std::size_t) { return std::optional<double>(0.0); };
  return g;
}

GalleryEntry forward_shift() {
  auto h = band_hints(0, 1);
  h.row_support = [](std::size_t i, std::size_t limit) { return i >= 2 ? single(i - 1, limit) : std::vector<std::size_t>{}; };
  h.acyclic = true;
  h.irreducible = false;
  h.radius_upper = 1;
  h.tail_norm = [](std::size_t) { return 1.0; };
  auto g = make("forward_shift", [](std::size_t i, std::size_t j) { return i == j + 1 ? 1.0 : 0.0; }, 1, std::move(h), Params::object());
  g.description = "a_{i+1,i} = 1";
  g.known = {
      {"mu", kv(0, "no cycles")},
      {"r", kv(1, "||A^k|| = 1 for every k")},
      {"r_prime", kv(1, "the path 1 -> 2 -> ... has weight 1 at every length")},
      {"r_ess", kv(1, "r = max(r_ess, mu) with mu = 0")},
      {"m", kv(1, "A^k e_j = e_{j+k}")},
      {"m_e", kv(1, "every local radius is 1")},
      {"sigma_p", kt("empty", "A x = t x forces x_1 = 0 and then x = 0")},
  };
  g.local_radius = [](std::size_t) { return std::optional<double>(1.0); };
  return g;
}

GalleryEntry diagonal(std::string name, std::function<double(std::size_t)> d, double norm, Params params,
                      std::function<double(std::size_t)> tail_norm) {
  auto h = band_hints(0, 0);
  h.row_support = [](std::size_t i, std::size_t limit) { return single(i, limit); };
  h.irreducible = false;
  h.radius_upper = norm;
  h.tail_norm = std::move(tail_norm);
  return make(std::move(name), [d](std::size_t i, std::size_t j) { return i == j ? d(i) : 0.0; }, norm, std::move(h), std::move(params));
}

GalleryEntry diag_ratio() {
  auto g = diagonal("diag_ratio", [](std::size_t i) { return static_cast<double>(i) / static_cast<double>(i + 1); }, 1,
                    Params::object(), [](std::size_t) { return 1.0; });
  g.description = "a_{ii} = i/(i+1)";
  g.known = {
      {"mu", kv(1, "sup of the loops i/(i+1), not attained")},
      {"r", kv(1, "r = mu for diagonal matrices")},
      {"m", kv(1, "sup_j j/(j+1)")},
      {"m_e", kv(1, "lim_j j/(j+1)")},
      {"r_prime", kv(0, "no simple path of positive length")},
      {"r_ess", kv(1, "sup_{i>n} i/(i+1) = 1 for every n")},
  };
  g.local_radius = [](std::size_t j) { return std::optional<double>(static_cast<double>(j) / static_cast<double>(j + 1)); };
  return g;
}

GalleryEntry diag_inverse() {
  auto g = diagonal("diag_inverse", [](std::size_t i) { return 1.0 / static_cast<double>(i); }, 1, Params::object(),
                    [](std::size_t n) { return 1.0 / static_cast<double>(n + 1); });
  g.description = "a_{ii} = 1/i";
  g.known = {
      {"mu", kv(1, "loop at 1")},
      {"m", kv(1, "r_{e_1} = 1")},
      {"r", kv(1, "r = mu for diagonal matrices")},
      {"m_e", kv(0, "r_{e_j} = 1/j -> 0")},
      {"r_prime", kv(0, "no simple path of positive length")},
      {"r_ess", kv(0, "r(P_n A P_n) = 1/(n+1) -> 0")},
  };
  g.local_radius = [](std::size_t j) { return std::optional<double>(1.0 / static_cast<double>(j)); };
  return g;
}

GalleryEntry diag_const(const Params& p) {
  check_keys(p, {"c"});
  const double c = param(p, "c");
  if (c < 0) throw ValidationError("c must be nonnegative");
  auto g = diagonal("diag_const", [c](std::size_t) { return c; }, c, Params{{"c", c}}, [c](std::size_t) { return c; });
  g.description = "a_{ii} = c";
  g.known = {
      {"mu", kv(c, "every loop has weight c")}, {"r", kv(c, "r = mu for diagonal matrices")},
      {"m", kv(c, "r_{e_j} = c")},           {"m_e", kv(c, "r_{e_j} = c")},
      {"r_ess", kv(c, "tail windows are c I")}, {"r_prime", kv(0, "no simple path of positive length")},
  };
  g.local_radius = [c](std::size_t) { return std::optional<double>(c); };
  return g;
}

GalleryEntry zero() {
  auto h = band_hints(0, 0);
  h.row_support = [](std::size_t, std::size_t) { return std::vector<std::size_t>{}; };
  h.acyclic = true;
  h.radius_upper = 0;
  h.tail_norm = [](std::size_t) { return 0.0; };
  auto g = make("zero", [](std::size_t, std::size_t) { return 0.0; }, 0, std::move(h), Params::object());
  g.description = "the zero matrix";
  for (const char* k : {"r", "mu", "r_prime", "r_ess", "m", "m_e"}) g.known[k] = kv(0, "all entries vanish");
  g.local_radius = [](std::size_t) { return std::optional<double>(0.0); };
  return g;
}

GalleryEntry star_means() {
  OracleHints h;
  h.row_support = [](std::size_t i, std::size_t limit) {
    std::vector<std::size_t> out;
    if (i == 1) {
      for (std::size_t j = 2; j <= limit; ++j) out.push_back(j);
    } else if (limit >= 1) {
      out.push_back(1);
    }
    return out;
  };
  h.irreducible = true;
  h.radius_upper = 1;
  h.tail_norm = [](std::size_t n) { return n == 0 ? 1.0 : 0.0; };
  auto entry = [](std::size_t i, std::size_t j) {
    if (i == 1 && j >= 2) return static_cast<double>(j - 1) / static_cast<double>(j);
    if (j == 1 && i >= 2) return static_cast<double>(i - 1) / static_cast<double>(i);
    return 0.0;
  };
  auto g = make("star_means", entry, 1, std::move(h), Params::object());
  g.description = "a_{1j} = a_{j1} = (j-1)/j for j >= 2";
  g.known = {
      {"mu", kv(1, "two-cycles (1, n) have mean (n-1)/n")},
      {"r", kv(1, "||A|| = 1 bounds r and r >= mu")},
      {"m", kv(1, "r_{e_j} = 1")},
      {"m_e", kv(1, "r_{e_j} = 1")},
      {"r_ess", kv(0, "P_1 A P_1 = 0")},
      {"r_prime", kv(0, "r' <= r_ess = 0")},
  };
  g.local_radius = [](std::size_t) { return std::optional<double>(1.0); };
  return g;
}

GalleryEntry epsilon_cycle(const Params& p) {
  check_keys(p, {"eps"});
  const double eps = param(p, "eps");
  if (!(eps > 0 && eps < 1)) throw ValidationError("eps must lie in (0, 1)");
  auto h = band_hints(0, 1);
  h.upper_bandwidth.reset();
  h.row_support = [](std::size_t i, std::size_t limit) {
    std::vector<std::size_t> out;
    if (i == 1) {
      for (std::size_t j = 1; j <= limit; ++j) out.push_back(j);
    } else if (i - 1 <= limit) {
      out.push_back(i - 1);
    }
    return out;
  };
  h.irreducible = true;
  h.radius_upper = 1;
  h.tail_norm = [](std::size_t) { return 1.0; };
  auto entry = [eps](std::size_t i, std::size_t j) {
    if (i == 1) return std::pow(eps, static_cast<double>(j));
    if (i == j + 1) return 1.0;
    return 0.0;
  };
  auto g = make("epsilon_cycle", entry, 1, std::move(h), Params{{"eps", eps}});
  g.description = "a_{1j} = eps^j, a_{j+1,j} = 1";
  g.known = {
      {"r", kv(1, "paths j+1 -> j -> ... -> 1 have weight 1")},
      {"mu", kv(eps, "the cycle 1 -> j -> j-1 -> ... -> 1 has weight eps^j over j edges")},
      {"r_ess", kv(1, "tail compressions keep the unit subdiagonal")},
      {"r_prime", kv(1, "r = max(mu, r') with mu < 1")},
      {"sigma_p", kt("empty", "an eigenvector would need x_j = t^(j-1) x_1 with sum over eps^j t^(j-1) = t")},
  };
  return g;
}

GalleryEntry kakutani_like(std::string name, std::optional<std::size_t> cutoff, double radius_upper) {
  auto h = band_hints(1, 0);
  h.radius_upper = radius_upper;
  h.row_support = [](std::size_t i, std::size_t limit) { return single(i + 1, limit); };
  h.acyclic = true;
  h.irreducible = false;
  h.tail_norm = [](std::size_t) { return 1.0; };
  const double floor_value = cutoff ? std::ldexp(1.0, -static_cast<int>(*cutoff)) : 0.0;
  auto entry = [cutoff, floor_value](std::size_t i, std::size_t j) {
    if (j != i + 1) return 0.0;
    const double w = kakutani_weight(i);
    return (!cutoff || w > floor_value) ? w : 0.0;
  };
  Params params = cutoff ? Params{{"m", *cutoff}} : Params::object();
  auto g = make(std::move(name), entry, 1, std::move(h), std::move(params));
  g.local_radius = [](std::size_t) { return std::optional<double>(0.0); };
  return g;
}

GalleryEntry kakutani() {
  auto g = kakutani_like("kakutani", std::nullopt, 1);
  g.description = "a_{i,i+1} = w_i, w_k = 2^-j for k = 2^j l with l odd";
  g.known = {
      {"r", kv(0.5, "||A^(2^m)||^(2^-m) = 2^-(sum_{j<m} j 2^-(j+1)) 2^(-m 2^-m) -> 1/2")},
      {"mu", kv(0, "no cycles")},
      {"m", kv(0, "A^k e_j vanishes for k >= j")},
      {"m_e", kv(0, "every local radius is 0")},
      {"r_prime", kv(0.5, "r = max(mu, r') with mu = 0")},
      {"r_ess", kv(0.5, "r = max(r_ess, mu) with mu = 0")},
  };
  return g;
}

GalleryEntry kakutani_cutoff(const Params& p) {
  check_keys(p, {"m"});
  const std::size_t m = int_param(p, "m", 1);
  if (m > 62) throw ValidationError("m must be at most 62");
  auto g = kakutani_like("kakutani_cutoff", m, 0);
  g.description = "kakutani weights w_i kept when w_i > 2^-m; ||A - A_m|| = 2^-m";
  for (const char* k : {"r", "mu", "r_prime", "r_ess", "m", "m_e"})
    g.known[k] = kv(0, "the weight at every multiple of 2^m is removed, so A_m^(2^m) = 0");
  return g;
}

GalleryEntry holder_family(const Params& p) {
  check_keys(p, {"alpha", "k"});
  const double alpha = param(p, "alpha");
  if (!(alpha > 0)) throw ValidationError("alpha must be positive");
  const std::size_t k = int_param(p, "k", 0, 0.0);
  if (k == 1) throw ValidationError("k must be 0 (base matrix) or >= 2");
  auto layout = std::make_shared<HolderLayout>(holder_layout(alpha));
  const double close = k >= 2 ? std::pow(static_cast<double>(k), -2.0 / alpha) : 0.0;

  auto decode = [layout](std::size_t p) {
    if (p > layout->size()) throw ResourceLimit("holder_family index beyond the enumerated prefix");
    return layout->pairs[p];
  };
  auto entry = [layout, decode, close](std::size_t p, std::size_t q) {
    const auto [i, j] = decode(p);
    const auto [i2, j2] = decode(q);
    if (i != i2) return 0.0;
    if (i == 1) return 1.0;
    if (j2 + 1 == j) return 1.0 + 1.0 / static_cast<double>(i);
    if (j == 1 && j2 == layout->block_size[i] && close > 0) return close;
    return 0.0;
  };
  OracleHints h;
  h.row_support = [layout, decode, close](std::size_t p, std::size_t limit) {
    std::vector<std::size_t> out;
    const auto [i, j] = decode(p);
    auto push = [&](std::size_t ii, std::size_t jj) {
      if (const auto q = layout->index_of(ii, jj); q && *q <= limit) out.push_back(*q);
    };
    if (i == 1) push(1, 1);
    else if (j >= 2) push(i, j - 1);
    else if (close > 0) push(i, layout->block_size[i]);
    return out;
  };
  h.irreducible = false;
  h.tail_norm = [](std::size_t) { return 1.5; };
  auto g = make("holder_family", entry, 1.5, std::move(h), Params{{"alpha", alpha}, {"k", k}});
  g.layout = *layout;
  if (k == 0) {
    g.description = "base matrix: loop at (1,1), chains (1 + 1/i) inside each block i >= 2";
    g.known = {
        {"r", kv(1, "the loop at (1,1) and the bounded chains give r = 1")},
        {"mu", kv(1, "the only cycle is the loop at (1,1)")},
    };
  } else {
    g.description = "B_k: base matrix with every block i >= 2 closed by k^(-2/alpha)";
  }
  return g;
}

GalleryEntry shift_perturbed(const Params& p) {
  check_keys(p, {"n", "eps", "eps_prime"});
  const std::size_t n = int_param(p, "n", 2);
  const double eps = param(p, "eps");
  const double eps_prime = param(p, "eps_prime", 0.0);
  if (!(eps > 0)) throw ValidationError("eps must be positive");
  if (!(eps_prime >= 0 && eps_prime < eps)) throw ValidationError("eps_prime must lie in [0, eps)");
  auto h = band_hints(1, n - 1);
  h.row_support = [n, eps_prime](std::size_t i, std::size_t limit) {
    if (i < n) return single(i + 1, limit);
    if (i == n && eps_prime > 0) return single(1, limit);
    return std::vector<std::size_t>{};
  };
  h.acyclic = eps_prime == 0;
  h.tail_norm = [n, eps](std::size_t m) { return m + 1 < n ? eps : 0.0; };
  auto entry = [n, eps, eps_prime](std::size_t i, std::size_t j) {
    if (i < n && j == i + 1) return eps;
    if (i == n && j == 1) return eps_prime;
    return 0.0;
  };
  const double r = eps_prime > 0 ? std::pow(std::pow(eps, static_cast<double>(n - 1)) * eps_prime, 1.0 / static_cast<double>(n)) : 0.0;
  h.radius_upper = r;
  auto g = make("shift_perturbed", entry, eps, std::move(h), Params{{"n", n}, {"eps", eps}, {"eps_prime", eps_prime}});
  g.description = eps_prime > 0 ? "C_{n,eps,eps'}: eps on a_{i,i+1} (i < n), eps' at (n,1)"
                                : "B_{n,eps}: eps on a_{i,i+1} (i < n)";
  g.known = {
      {"r", kv(r, "single cycle of length n with weight eps^(n-1) eps'")},
      {"mu", kv(r, "single cycle of length n with weight eps^(n-1) eps'")},
      {"r_ess", kv(0, "tail windows past n vanish")},
  };
  return g;
}

GalleryEntry forward_shift_bump(const Params& p) {
  check_keys(p, {"k"});
  const std::size_t k = int_param(p, "k", 1);
  auto h = band_hints(k - 1, 1);
  h.row_support = [k](std::size_t i, std::size_t limit) {
    std::vector<std::size_t> out;
    if (i >= 2 && i - 1 <= limit) out.push_back(i - 1);
    if (i == 1 && k <= limit) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
  };
  h.radius_upper = 1;
  h.tail_norm = [](std::size_t) { return 1.0; };
  const double bump = 1.0 / static_cast<double>(k);
  auto entry = [k, bump](std::size_t i, std::size_t j) {
    double v = i == j + 1 ? 1.0 : 0.0;
    if (i == 1 && j == k) v = std::max(v, bump);
    return v;
  };
  auto g = make("forward_shift_bump", entry, 1, std::move(h), Params{{"k", k}});
  g.description = "forward shift plus a_{1k} = 1/k";
  const double mu = std::pow(static_cast<double>(k), -1.0 / static_cast<double>(k));
  g.known = {
      {"mu", {mu, "k^(-1/k)", "the only cycle is 1 -> k -> k-1 -> ... -> 1 with weight 1/k"}},
      {"r", kv(1, "contains the forward shift and ||A|| = 1")},
  };
  return g;
}

}  // namespace

std::vector<GalleryInfo> gallery_list() {
  return {
      {"backward_shift", "", "a_{i,i+1} = 1; mu = m = 0, r = 1"},
      {"forward_shift", "", "a_{i+1,i} = 1; r = r_ess = r' = m = m_e = 1, mu = 0, no eigenvalues"},
      {"diag_ratio", "", "a_{ii} = i/(i+1); mu = r = 1 with the supremum not attained"},
      {"diag_inverse", "", "a_{ii} = 1/i; r_{e_j} = 1/j, mu = m = r = 1, r' = r_ess = m_e = 0"},
      {"star_means", "", "a_{1j} = a_{j1} = (j-1)/j; r = mu = m = m_e = 1, r_ess = 0"},
      {"epsilon_cycle", "eps in (0,1)", "a_{1j} = eps^j, a_{j+1,j} = 1; r = r_ess = 1, mu = eps, no eigenvalues"},
      {"kakutani", "", "weighted shift w_k = 2^-(trailing zeros of k); r = 1/2, mu = 0"},
      {"kakutani_cutoff", "m >= 1", "kakutani weights above 2^-m; nilpotent, distance 2^-m"},
      {"holder_family", "alpha > 0, k = 0 or k >= 2", "block chains (1+1/i) closed by k^(-2/alpha); r is not Holder continuous"},
      {"shift_perturbed", "n >= 2, eps > 0, 0 <= eps_prime < eps", "finite shift B_{n,eps}, closed by eps' at (n,1) for C_{n,eps,eps'}"},
      {"zero", "", "the zero matrix"},
      {"diag_const", "c >= 0", "a_{ii} = c"},
      {"forward_shift_bump", "k >= 1", "forward shift plus a_{1k} = 1/k; mu = k^(-1/k)"},
  };
}

GalleryEntry gallery(const std::string& name, const nlohmann::json& params) {
  const Params p = params.is_null() ? Params::object() : params;
  auto no_params = [&] { check_keys(p, {}); };
  if (name == "backward_shift") return no_params(), backward_shift();
  if (name == "forward_shift") return no_params(), forward_shift();
  if (name == "diag_ratio") return no_params(), diag_ratio();
  if (name == "diag_inverse") return no_params(), diag_inverse();
  if (name == "star_means") return no_params(), star_means();
  if (name == "zero") return no_params(), zero();
  if (name == "kakutani") return no_params(), kakutani();
  if (name == "epsilon_cycle") return epsilon_cycle(p);
  if (name == "kakutani_cutoff") return kakutani_cutoff(p);
  if (name == "holder_family") return holder_family(p);
  if (name == "shift_perturbed") return shift_perturbed(p);
  if (name == "diag_const") return diag_const(p);
  if (name == "forward_shift_bump") return forward_shift_bump(p);
  throw ValidationError("unknown gallery entry '" + name + "'");
}

}  // namespace maxspec
