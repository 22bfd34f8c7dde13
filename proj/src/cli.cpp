#include "maxspec/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxspec/blockform.hpp"
#include "maxspec/continuity.hpp"
#include "maxspec/errors.hpp"
#include "maxspec/estimators.hpp"
#include "maxspec/finite_spectral.hpp"
#include "maxspec/gallery.hpp"
#include "maxspec/io.hpp"
#include "maxspec/oracle.hpp"
#include "maxspec/report.hpp"

namespace maxspec {

namespace {

using nlohmann::json;

struct Config {
  std::string command;
  std::string sub;
  std::string input;
  std::string perturbed;
  std::string gallery;
  std::vector<std::string> params;
  std::optional<std::size_t> N, K;
  std::optional<double> tol;
  std::string output;
  std::string format = "json";

  std::optional<double> t, eps, alpha;
  std::optional<std::size_t> j, i0, k, J, m_max, count, seed, beam, row, col;
  std::vector<std::size_t> n_list, k_list;
  std::string case_name;
};

json config_json(const Config& c) {
  json out;
  out["command"] = c.command;
  if (!c.sub.empty()) out["subcommand"] = c.sub;
  auto put = [&](const char* key, const auto& v) {
    if (v) out[key] = *v;
  };
  if (!c.input.empty()) out["input"] = c.input;
  if (!c.perturbed.empty()) out["perturbed"] = c.perturbed;
  if (!c.gallery.empty()) out["gallery"] = c.gallery;
  if (!c.params.empty()) out["params"] = c.params;
  put("N", c.N);
  put("K", c.K);
  put("tol", c.tol);
  put("t", c.t);
  put("eps", c.eps);
  put("alpha", c.alpha);
  put("j", c.j);
  put("i0", c.i0);
  put("k", c.k);
  put("J", c.J);
  put("m_max", c.m_max);
  put("count", c.count);
  put("seed", c.seed);
  put("beam", c.beam);
  put("row", c.row);
  put("col", c.col);
  if (!c.n_list.empty()) out["n"] = c.n_list;
  if (!c.k_list.empty()) out["k_list"] = c.k_list;
  if (!c.case_name.empty()) out["case"] = c.case_name;
  out["format"] = c.format;
  return out;
}

/// A report plus an optional series projection for CSV.
struct Output {
  json body;
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

json params_json(const std::vector<std::string>& params) {
  json out = json::object();
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--params expects key=value, got '" + p + "'");
    const std::string key = p.substr(0, eq);
    const std::string val = p.substr(eq + 1);
    if (out.contains(key)) throw ValidationError("parameter '" + key + "' given twice");
    double x = 0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), x);
    if (ec == std::errc() && ptr == val.data() + val.size()) out[key] = x;
    else out[key] = val;
  }
  return out;
}

FiniteMaxMatrix finite_matrix(const json& j) {
  if (j.is_object() && j.contains("kind")) {
    if (j.at("kind") != "table") throw ValidationError("this command needs a finite matrix, not a '" + j.at("kind").get<std::string>() + "' oracle");
    return matrix_from_json(j.contains("matrix") ? j.at("matrix") : j);
  }
  return matrix_from_json(j);
}

FiniteMaxMatrix require_matrix(const std::string& path, const char* flag) {
  if (path.empty()) throw ValidationError(std::string("missing ") + flag);
  return finite_matrix(load_json(path));
}

struct Source {
  OraclePtr oracle;
  std::optional<GalleryEntry> entry;
};

Source oracle_source(const Config& c) {
  if (!c.gallery.empty() && !c.input.empty()) throw ValidationError("give either --gallery or --input, not both");
  if (!c.gallery.empty()) {
    GalleryEntry g = gallery(c.gallery, params_json(c.params));
    OraclePtr o = g.oracle;
    return {o, std::move(g)};
  }
  if (!c.params.empty()) throw ValidationError("--params applies to --gallery only");
  if (c.input.empty()) throw ValidationError("missing --gallery or --input");
  const json j = load_json(c.input);
  if (j.is_object() && j.contains("kind")) return {oracle_from_json(j), std::nullopt};
  return {table_oracle(matrix_from_json(j), "input"), std::nullopt};
}

EstimateOptions options(const Config& c) {
  EstimateOptions o;
  if (c.N) o.N = *c.N;
  if (c.K) o.K = *c.K;
  if (c.tol) o.tol_rel = *c.tol;
  if (c.beam) o.beam_width = *c.beam;
  if (o.N == 0) throw ValidationError("--N must be at least 1");
  if (!(o.tol_rel > 0)) throw ValidationError("--tol must be positive");
  o.N0 = std::min(o.N0, o.N);
  return o;
}

Output schedule_output(const SpectralEstimate& e) {
  Output out{to_json(e), {"N", "K", "value"}, {}};
  for (const auto& r : e.schedule) out.rows.push_back({r.N, r.K, number_json(r.value)});
  if (!e.schedule.empty() && e.schedule.front().n) {
    out.header = {"n", "N", "value"};
    out.rows.clear();
    for (const auto& r : e.schedule) out.rows.push_back({*r.n, r.N, number_json(r.value)});
  }
  return out;
}

Output cmd_spectrum(const Config& c) {
  const FiniteMaxMatrix a = require_matrix(c.input, "--input");
  const FiniteSpectrum s = spectrum(a);
  Output out{to_json(s), {"j", "local_radius"}, {}};
  for (std::size_t j = 0; j < s.local_radii.size(); ++j) out.rows.push_back({j + 1, scalar_to_json(s.local_radii[j])});
  return out;
}

Output cmd_estimate(const Config& c) {
  const Source src = oracle_source(c);
  const MatrixOracle& o = *src.oracle;
  const EstimateOptions opt = options(c);
  SpectralEstimate e;
  std::string key;
  if (c.sub == "r") {
    e = radius_estimate(o, opt);
    key = "r";
  } else if (c.sub == "mu") {
    e = mu_estimate(o, opt);
    key = "mu";
  } else if (c.sub == "rprime") {
    e = r_prime_estimate(o, opt, c.k);
    key = "r_prime";
  } else if (c.sub == "ress") {
    e = r_ess_estimate(o, c.n_list.empty() ? default_tail_schedule(opt.N) : c.n_list, opt);
    key = "r_ess";
  } else if (c.sub == "m") {
    e = m_estimate(o, c.J, opt);
    key = "m";
  } else if (c.sub == "me") {
    e = m_e_estimate(o, c.J, opt);
    key = "m_e";
  } else if (c.sub == "cej") {
    if (!c.j || !c.t) throw ValidationError("estimate cej needs --j and --t");
    e = c_ej_estimate(o, *c.j, *c.t, opt);
  } else {
    throw ValidationError("unknown quantity '" + c.sub + "'");
  }
  if (src.entry && !key.empty()) attach_known(e, *src.entry, key);
  return schedule_output(e);
}

Output cmd_eig(const Config& c) {
  if (!c.t) throw ValidationError("eig needs --t");
  bool finite = c.gallery.empty();
  json j;
  if (finite) {
    if (c.input.empty()) throw ValidationError("missing --gallery or --input");
    j = load_json(c.input);
    finite = !(j.is_object() && j.contains("kind") && j.at("kind") != "table");
  }
  if (finite && !c.N) {
    const FiniteMaxMatrix a = finite_matrix(j);
    const MaxScalar t = MaxScalar::from_linear(*c.t);
    const MaxVector x = eigvec_finite(a, t);
    const MaxVector y = mat_vec(a, x);
    MaxScalar worst;
    for (std::size_t i = 0; i < x.size(); ++i) worst = oplus(worst, abs_diff(y[i], t * x[i]));
    Output out;
    out.body = {{"t", *c.t}, {"vector", vector_to_json(x)}, {"residual", scalar_to_json(worst / norm(x))}};
    out.header = {"i", "x"};
    for (std::size_t i = 0; i < x.size(); ++i) out.rows.push_back({i + 1, scalar_to_json(x[i])});
    return out;
  }
  const Source src = oracle_source(c);
  const std::size_t N = c.N.value_or(512);
  const EigenCandidate cand = eigenvector_construct(*src.oracle, c.i0.value_or(1), *c.t, N, c.J);
  SpectralEstimate e;
  e.quantity = "eigen_residual";
  e.lower = cand.residual;
  e.upper = cand.residual;
  e.schedule.push_back({N, cand.depth, cand.residual, std::nullopt});
  e.converged = cand.stabilized;
  e.notes.push_back("residual of the window series vector; a small value supports t in the point spectrum");
  if (src.entry) attach_known(e, *src.entry, "sigma_p");
  e.details["candidate"] = to_json(cand);
  return schedule_output(e);
}

Output cmd_blocks(const Config& c) {
  if (c.gallery.empty()) {
    const json j = c.input.empty() ? throw ValidationError("missing --gallery or --input") : load_json(c.input);
    if (!(j.is_object() && j.contains("kind") && j.at("kind") != "table")) {
      const FiniteMaxMatrix a = finite_matrix(j);
      return {to_json(fnf(a), level_permutation(a)), {}, {}};
    }
  }
  const Source src = oracle_source(c);
  return {to_json(window_levels(*src.oracle, c.N.value_or(256))), {}, {}};
}

FiniteMaxMatrix random_matrix(std::mt19937_64& rng, std::size_t n, double density) {
  std::uniform_real_distribution<double> val(0.1, 10.0);
  std::bernoulli_distribution keep(density);
  FiniteMaxMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (keep(rng)) a(i, j) = MaxScalar::from_linear(val(rng));
  return a;
}

Output cmd_probe(const Config& c) {
  if (c.sub == "ap") {
    if (!c.t) throw ValidationError("probe ap needs --t");
    const Source src = oracle_source(c);
    const std::size_t N = c.N.value_or(256);
    const std::size_t K = c.K.value_or(16);
    const ApProbe p = ap_spectrum_probe(*src.oracle, *c.t, N, K);
    SpectralEstimate e;
    e.quantity = "ap_residual";
    e.lower = 0;
    if (p.certified) e.upper = p.value;
    else e.heuristic = p.value;
    e.schedule.push_back({N, K, p.value, std::nullopt});
    e.notes.push_back(p.certified ? "every row that can be nonzero was evaluated, so the value bounds the infimum from above"
                                  : "rows beyond the checked range may add to the residual");
    e.details["probe"] = to_json(p);
    return schedule_output(e);
  }
  if (c.sub == "lipschitz") {
    const std::size_t K = c.K.value_or(32);
    if (!c.input.empty() || !c.perturbed.empty()) {
      const auto a = require_matrix(c.input, "--input");
      const auto b = require_matrix(c.perturbed, "--perturbed");
      const auto r = lipschitz_power_bound_check(a, b, c.k.value_or(K));
      return {to_json(r), {}, {}};
    }
    std::mt19937_64 rng(c.seed.value_or(1));
    const std::size_t count = c.count.value_or(100);
    std::uniform_int_distribution<std::size_t> pick_k(1, K);
    std::size_t violations = 0;
    json first = nullptr;
    double worst = 0;
    for (std::size_t q = 0; q < count; ++q) {
      const auto a = random_matrix(rng, 5, 0.5);
      const auto b = random_matrix(rng, 5, 0.5);
      const auto r = lipschitz_power_bound_check(a, b, pick_k(rng));
      const auto& chk = r.checks.front();
      if (chk.rhs > 0) worst = std::max(worst, chk.lhs / chk.rhs);
      if (!r.ok()) {
        ++violations;
        if (first.is_null()) first = to_json(r);
      }
    }
    return {{{"count", count}, {"violations", violations}, {"max_lhs_over_rhs", worst}, {"first_violation", first}}, {}, {}};
  }
  if (c.sub == "kakutani") {
    const auto r = kakutani_experiment(c.m_max.value_or(10));
    Output out{to_json(r), {"k", "value"}, {}};
    for (const auto& [k, v] : r.series) out.rows.push_back({k, number_json(v)});
    return out;
  }
  if (c.sub == "holder") {
    const auto r = holder_experiment(c.alpha.value_or(1.0), c.k_list.empty() ? std::vector<std::size_t>{2, 4, 8} : c.k_list);
    Output out{to_json(r), {"k", "ratio"}, {}};
    for (const auto& h : r.rows) out.rows.push_back({h.k, number_json(h.ratio)});
    return out;
  }
  if (c.sub == "semicontinuity") {
    const std::string which = c.case_name.empty() ? "all" : c.case_name;
    const std::size_t count = c.count.value_or(40);
    std::vector<SemicontinuityReport> reports;
    if (which == "bump" || (which == "all" && !c.input.empty())) {
      const auto a = require_matrix(c.input, "--input");
      const std::size_t i = c.row.value_or(1), j = c.col.value_or(1);
      if (i == 0 || j == 0) throw ValidationError("--row and --col are 1-based");
      reports.push_back(semicontinuity_scan("single_entry_bump", a, single_entry_bump(a, i - 1, j - 1), count));
    }
    if (which == "random" || which == "all") {
      std::mt19937_64 rng(c.seed.value_or(1));
      const auto a = c.input.empty() ? random_matrix(rng, 5, 0.5) : require_matrix(c.input, "--input");
      reports.push_back(semicontinuity_scan("geometric_perturbation", a, geometric_perturbation(a, c.seed.value_or(1)), count));
    }
    if (which == "kakutani" || which == "all") reports.push_back(kakutani_scan(c.m_max.value_or(10)));
    if (which == "mu_bump" || which == "all") {
      const auto ks = c.k_list.empty() ? std::vector<std::size_t>{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024} : c.k_list;
      reports.push_back(mu_bump_scan(ks));
    }
    if (reports.empty()) throw ValidationError("unknown case '" + which + "' (bump, random, kakutani, mu_bump, all)");
    Output out{{{"cases", json::array()}}, {"case", "n", "distance", "r", "mu"}, {}};
    for (const auto& r : reports) {
      out.body["cases"].push_back(to_json(r));
      for (std::size_t n = 0; n < r.r.size(); ++n)
        out.rows.push_back({r.name, n + 1, number_json(r.distances[n]), number_json(r.r[n]), number_json(r.mu[n])});
    }
    return out;
  }
  if (c.sub == "weaker") {
    const auto a = require_matrix(c.input, "--input");
    const auto b = require_matrix(c.perturbed, "--perturbed");
    double eps = 0;
    if (c.eps) eps = *c.eps;
    else eps = radius_finite(b).value() / 2;
    return {to_json(weaker_holder_bound_check(a, b, eps)), {}, {}};
  }
  throw ValidationError("unknown probe '" + c.sub + "'");
}

Output cmd_gallery(const Config& c) {
  if (c.sub == "list") {
    Output out{{{"gallery", json::array()}}, {"name", "parameters", "description"}, {}};
    for (const auto& g : gallery_list()) {
      out.body["gallery"].push_back({{"name", g.name}, {"parameters", g.parameters}, {"description", g.description}});
      out.rows.push_back({g.name, g.parameters, g.description});
    }
    return out;
  }
  if (c.gallery.empty()) throw ValidationError("gallery show needs a name");
  return {gallery_json(c.gallery, gallery(c.gallery, params_json(c.params))), {}, {}};
}

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_object() && v.contains("log2")) return "2^" + v.at("log2").dump();
  return v.dump();
}

std::string render(const Output& o, const Config& c) {
  if (c.format == "csv") {
    if (o.header.empty()) throw ValidationError("csv output is not available for '" + c.command + "'");
    std::ostringstream s;
    for (std::size_t q = 0; q < o.header.size(); ++q) s << (q ? "," : "") << o.header[q];
    s << "\n";
    for (const auto& row : o.rows) {
      for (std::size_t q = 0; q < row.size(); ++q) s << (q ? "," : "") << csv_cell(row[q]);
      s << "\n";
    }
    return s.str();
  }
  json body = o.body;
  body["config"] = config_json(c);
  return body.dump(2) + "\n";
}

void common_options(CLI::App* app, Config& c) {
  app->add_option("--input", c.input, "matrix or oracle JSON file");
  app->add_option("--gallery", c.gallery, "gallery name");
  app->add_option("--params", c.params, "gallery parameters key=value")->allow_extra_args(false)->take_all();
  app->add_option("--N", c.N, "largest window");
  app->add_option("--K", c.K, "power / path horizon");
  app->add_option("--tol", c.tol, "relative stabilization tolerance");
  app->add_option("--output", c.output, "write the report to a file");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"max-algebra spectral toolkit", "maxspec"};
  app.require_subcommand(1);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "finite matrix: r, mu, local radii, point spectrum");
  common_options(spectrum_cmd, c);

  auto* estimate = app.add_subcommand("estimate", "bounds for an infinite matrix");
  estimate->require_subcommand(1);
  for (const char* q : {"r", "mu", "rprime", "ress", "m", "me", "cej"}) {
    auto* s = estimate->add_subcommand(q);
    common_options(s, c);
    s->add_option("--j", c.j, "index (cej)");
    s->add_option("--t", c.t, "scale (cej)");
    s->add_option("--n", c.n_list, "tail offsets (ress)")->delimiter(',');
    s->add_option("--J", c.J, "index limit (m) or trailing window (me)");
    s->add_option("--k-lo", c.k, "smallest path length (rprime)");
    s->add_option("--beam", c.beam, "beam width for simple paths");
  }

  auto* eig = app.add_subcommand("eig", "eigenvector for t");
  common_options(eig, c);
  eig->add_option("--t", c.t, "eigenvalue");
  eig->add_option("--i0", c.i0, "base index of the series (1-based)");
  eig->add_option("--J", c.J, "series depth");

  auto* blocks = app.add_subcommand("blocks", "Frobenius normal form and levels");
  common_options(blocks, c);

  auto* probe = app.add_subcommand("probe", "numerical experiments");
  probe->require_subcommand(1);
  for (const char* q : {"ap", "lipschitz", "kakutani", "holder", "semicontinuity", "weaker"}) {
    auto* s = probe->add_subcommand(q);
    common_options(s, c);
    s->add_option("--perturbed", c.perturbed, "second matrix");
    s->add_option("--t", c.t, "scale");
    s->add_option("--k", c.k, "power");
    s->add_option("--k-list", c.k_list, "k values")->delimiter(',');
    s->add_option("--eps", c.eps, "slack");
    s->add_option("--alpha", c.alpha, "Holder order");
    s->add_option("--m-max", c.m_max, "largest cutoff");
    s->add_option("--count", c.count, "number of samples or terms");
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--case", c.case_name, "bump, random, kakutani, mu_bump or all");
    s->add_option("--row", c.row, "bump row (1-based)");
    s->add_option("--col", c.col, "bump column (1-based)");
  }

  auto* gal = app.add_subcommand("gallery", "named test matrices");
  gal->require_subcommand(1);
  auto* gal_list = gal->add_subcommand("list");
  gal_list->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
  gal_list->add_option("--output", c.output);
  auto* gal_show = gal->add_subcommand("show");
  gal_show->add_option("name", c.gallery)->required();
  gal_show->add_option("--params", c.params)->take_all();
  gal_show->add_option("--output", c.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Output o;
    if (spectrum_cmd->parsed()) {
      c.command = "spectrum";
      o = cmd_spectrum(c);
    } else if (estimate->parsed()) {
      c.command = "estimate";
      c.sub = estimate->get_subcommands().front()->get_name();
      o = cmd_estimate(c);
    } else if (eig->parsed()) {
      c.command = "eig";
      o = cmd_eig(c);
    } else if (blocks->parsed()) {
      c.command = "blocks";
      o = cmd_blocks(c);
    } else if (probe->parsed()) {
      c.command = "probe";
      c.sub = probe->get_subcommands().front()->get_name();
      o = cmd_probe(c);
    } else {
      c.command = "gallery";
      c.sub = gal->get_subcommands().front()->get_name();
      o = cmd_gallery(c);
    }
    const std::string text = render(o, c);
    if (c.output.empty()) {
      out << text;
    } else {
      std::ofstream f(c.output);
      if (!f) throw ValidationError("cannot write '" + c.output + "'");
      f << text;
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const OracleViolation& e) {
    err << "oracle violation: " << e.what() << "\n";
    return 3;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return 4;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace maxspec
