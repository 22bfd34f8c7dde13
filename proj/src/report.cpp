#include "maxspec/report.hpp"

#include <cmath>

#include "maxspec/io.hpp"

namespace maxspec {

using nlohmann::json;

namespace {

json one_based(std::vector<std::size_t> v) {
  for (auto& i : v) ++i;
  return v;
}

json scalars(const std::vector<MaxScalar>& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(scalar_to_json(s));
  return out;
}

json opt_number(const std::optional<double>& x) { return x ? number_json(*x) : json(nullptr); }

json inequalities(const std::vector<Inequality>& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back({{"name", c.name}, {"lhs", number_json(c.lhs)}, {"rhs", number_json(c.rhs)}, {"holds", c.holds}});
  return out;
}

json series(const std::vector<std::pair<std::size_t, double>>& s) {
  json out = json::array();
  for (const auto& [k, v] : s) out.push_back({{"k", k}, {"value", number_json(v)}});
  return out;
}

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number_json(x));
  return out;
}

}  // namespace

json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json to_json(const FiniteSpectrum& s) {
  json out;
  out["r"] = scalar_to_json(s.radius);
  out["mu"] = scalar_to_json(s.mu);
  out["local_radii"] = scalars(s.local_radii);
  out["point_spectrum"] = scalars(s.point_spectrum);
  out["critical_cycle"] = s.critical_witness ? one_based(s.critical_witness->nodes) : json::array();
  return out;
}

json to_json(const BlockDecomposition& b, const std::vector<std::size_t>& level_permutation) {
  json out;
  out["permutation"] = one_based(b.permutation);
  out["classes"] = json::array();
  for (const auto& c : b.classes) out["classes"].push_back(one_based(c));
  out["class_radii"] = scalars(b.class_radii);
  out["trivial"] = b.trivial;
  out["levels"] = json::array();
  for (const auto& lv : b.levels) out["levels"].push_back({{"value", scalar_to_json(lv.value)}, {"indices", one_based(lv.indices)}});
  out["level_permutation"] = one_based(level_permutation);
  out["condensation_edges"] = json::array();
  for (const auto& [mu, nu] : b.condensation_edges) out["condensation_edges"].push_back({mu + 1, nu + 1});
  return out;
}

json to_json(const WindowLevels& w) {
  json out;
  out["window"] = w.window;
  out["levels"] = json::array();
  for (const auto& lv : w.levels) out["levels"].push_back({{"value", scalar_to_json(lv.value)}, {"indices", lv.indices}});
  out["tail_start"] = w.tail_start;
  out["note"] = "level values are window lower bounds; indices from tail_start on form one unresolved block";
  return out;
}

json to_json(const KnownValue& k) {
  return {{"value", opt_number(k.value)}, {"text", k.text}, {"justification", k.justification}};
}

json to_json(const SpectralEstimate& e) {
  json out;
  out["quantity"] = e.quantity;
  out["lower"] = number_json(e.lower);
  out["upper"] = opt_number(e.upper);
  out["heuristic"] = opt_number(e.heuristic);
  out["proxy"] = e.proxy;
  out["exact"] = e.exact;
  if (e.cycle)
    out["witness"] = {{"kind", "cycle"}, {"indices", e.cycle->nodes}, {"geometric_mean", scalar_to_json(e.cycle->geometric_mean)}};
  else if (e.path)
    out["witness"] = {{"kind", "path"}, {"indices", e.path->indices}, {"weight", scalar_to_json(e.path->weight)}};
  else
    out["witness"] = nullptr;
  out["schedule"] = json::array();
  for (const auto& r : e.schedule) {
    json row = {{"N", r.N}, {"K", r.K}, {"value", number_json(r.value)}};
    if (r.n) row["n"] = *r.n;
    out["schedule"].push_back(row);
  }
  out["converged"] = e.converged;
  out["known"] = e.known ? to_json(*e.known) : json(nullptr);
  out["notes"] = e.notes;
  out["details"] = e.details;
  return out;
}

json to_json(const EigenCandidate& c) {
  return {{"base", c.base},       {"t", c.t},           {"N", c.N},           {"depth", c.depth},
          {"stabilized", c.stabilized}, {"residual", number_json(c.residual)}, {"margin", c.margin},
          {"margin_from_hint", c.margin_from_hint}, {"vector", vector_to_json(c.x)}};
}

json to_json(const ApProbe& p) {
  return {{"t", p.t}, {"value", number_json(p.value)}, {"candidate", p.candidate}, {"certified", p.certified}, {"rows_checked", p.rows_checked}};
}

json to_json(const PowerBoundReport& p) {
  return {{"N", p.N}, {"norms", scalars(p.norms)}, {"sup", scalar_to_json(p.sup)}, {"threshold", p.threshold}, {"bounded", p.bounded}};
}

json to_json(const IrreducibilityReport& r) {
  return {{"N", r.N},
          {"classes", r.classes},
          {"window_irreducible", r.window_irreducible},
          {"oracle_irreducible", r.oracle_irreducible ? json(*r.oracle_irreducible) : json(nullptr)}};
}

json to_json(const PerturbationReport& r) {
  json out;
  out["op"] = r.op;
  out["inputs"] = r.inputs;
  out["distance"] = number_json(r.distance);
  out["norm_base"] = number_json(r.norm_base);
  out["norm_perturbed"] = number_json(r.norm_perturbed);
  out["r_base"] = opt_number(r.r_base);
  out["r_perturbed"] = opt_number(r.r_perturbed);
  out["mu_base"] = opt_number(r.mu_base);
  out["mu_perturbed"] = opt_number(r.mu_perturbed);
  out["k"] = r.k ? json(*r.k) : json(nullptr);
  out["checks"] = inequalities(r.checks);
  out["ok"] = r.ok();
  out["details"] = r.details;
  return out;
}

json to_json(const KakutaniReport& r) {
  json out;
  out["m_max"] = r.m_max;
  out["cutoffs"] = json::array();
  for (const auto& c : r.cutoffs)
    out["cutoffs"].push_back({{"m", c.m},
                              {"window", c.window},
                              {"nilpotency_index", c.nilpotency_index},
                              {"power_vanishes", c.power_vanishes},
                              {"r", 0.0},
                              {"distance", c.distance},
                              {"distance_exact", c.distance_exact}});
  out["gelfand"] = {{"k", r.gelfand_k}, {"N", r.gelfand_N}, {"value", r.gelfand}, {"closed_form", r.closed_form}};
  out["r_known"] = r.r_known;
  out["gap"] = r.gap;
  out["series"] = series(r.series);
  out["ok"] = r.ok();
  return out;
}

json to_json(const HolderReport& r) {
  json out;
  out["alpha"] = r.alpha;
  out["r_base"] = r.r_base;
  out["rows"] = json::array();
  for (const auto& h : r.rows)
    out["rows"].push_back({{"k", h.k},
                           {"n_k", h.n_k},
                           {"window", h.window},
                           {"distance", h.distance},
                           {"r_cycle", h.r_cycle},
                           {"r_window", h.r_window},
                           {"ratio", number_json(h.ratio)},
                           {"bound", h.bound},
                           {"holds", h.holds}});
  out["ok"] = r.ok();
  return out;
}

json to_json(const LipschitzCounterexample& r) {
  return {{"eps", r.eps},         {"eps_prime", r.eps_prime}, {"n", r.n},
          {"r_B", r.r_b},         {"r_C", r.r_c},             {"r_C_closed_form", r.r_c_closed},
          {"dist_A_B", r.dist_ab}, {"dist_A_C", r.dist_ac},   {"dist_B_C", r.dist_bc},
          {"ratio", number_json(r.ratio)}, {"series", series(r.series)}, {"ok", r.ok()}};
}

json to_json(const SemicontinuityReport& r) {
  json out;
  out["name"] = r.name;
  out["distances"] = numbers(r.distances);
  out["r"] = numbers(r.r);
  out["mu"] = numbers(r.mu);
  out["r_target"] = r.r_target;
  out["mu_target"] = r.mu_target;
  out["limsup_r"] = number_json(r.limsup_r);
  out["liminf_mu"] = number_json(r.liminf_mu);
  out["tol"] = r.tol;
  out["r_upper_semicontinuous"] = r.r_upper;
  out["mu_lower_semicontinuous"] = r.mu_lower;
  out["r_strict"] = r.r_strict;
  out["mu_strict"] = r.mu_strict;
  out["notes"] = r.notes;
  out["ok"] = r.ok();
  return out;
}

json gallery_json(const std::string& name, const GalleryEntry& g) {
  const auto& o = *g.oracle;
  const auto& h = o.hints();
  json out;
  out["name"] = name;
  out["oracle"] = o.name();
  out["params"] = o.params();
  out["description"] = g.description;
  out["norm_bound"] = o.norm_bound();
  out["hints"] = {{"upper_bandwidth", h.upper_bandwidth ? json(*h.upper_bandwidth) : json(nullptr)},
                  {"lower_bandwidth", h.lower_bandwidth ? json(*h.lower_bandwidth) : json(nullptr)},
                  {"acyclic", h.acyclic},
                  {"irreducible", h.irreducible ? json(*h.irreducible) : json(nullptr)},
                  {"radius_upper", opt_number(h.radius_upper)},
                  {"row_support", static_cast<bool>(h.row_support)},
                  {"tail_norm", static_cast<bool>(h.tail_norm)}};
  out["known"] = json::object();
  for (const auto& [k, v] : g.known) out["known"][k] = to_json(v);
  if (g.layout) out["layout"] = {{"alpha", g.layout->alpha}, {"prefix", g.layout->size()}};
  return out;
}

}  // namespace maxspec
