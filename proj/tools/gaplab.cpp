#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gaplab/acceptance.hpp"
#include "gaplab/expression.hpp"
#include "gaplab/json_io.hpp"
#include "gaplab/parallel.hpp"

using namespace gaplab;

namespace {

// bad option values (as opposed to failed computations)
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string model;
  std::string graph = "complete";
  int d = 1;
  int N = 3;
  std::optional<double> omega;
  std::string omega_range;
  double gamma = 1.0;
  std::string g = "constant-one";
  std::string rho = "uniform";
  int degree = 4;
  int n_max = 40;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  Json extra = Json::object();

  Json to_json() const {
    Json j{{"command", command}};
    if (!model.empty()) j["model"] = model;
    j["graph"] = {{"kind", graph}, {"d", d}, {"N", N}};
    if (omega) j["omega"] = *omega;
    if (!omega_range.empty()) j["omega_range"] = omega_range;
    j["gamma"] = gamma;
    j["g"] = g;
    j["rho"] = rho;
    j["degree"] = degree;
    j["n_max"] = n_max;
    j["seed"] = seed;
    j["out"] = out;
    j["format"] = format;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j;
  }
};

struct Output {
  std::vector<std::string> columns;  // CSV layout
  Json rows = Json::array();         // records flattened into CSV
  Json results = Json::array();      // JSON results (defaults to rows)
  std::vector<std::string> references;
};

std::string inner_argument(const std::string& spec, const std::string& head) {
  // accepts head:ARG and head(ARG)
  if (spec.rfind(head + ":", 0) == 0) return spec.substr(head.size() + 1);
  if (spec.rfind(head + "(", 0) == 0 && spec.back() == ')') return spec.substr(head.size() + 1, spec.size() - head.size() - 2);
  return {};
}

RateFunction parse_g(const std::string& spec) {
  if (spec == "constant-one") return RateFunction::constant_one();
  if (spec == "identity") return RateFunction::identity();
  const auto path = inner_argument(spec, "user-table");
  if (path.empty()) throw UsageError("--g must be constant-one, identity or user-table:FILE");
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open rate table '" + path + "'");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    for (auto& c : line)
      if (c == ',') c = ' ';
    std::istringstream row(line);
    long k;
    double v;
    if (!(row >> k >> v)) throw UsageError("rate table line '" + line + "' is not 'k,g(k)'");
    if (k != static_cast<long>(values.size()) + 1) throw UsageError("rate table must list k = 1, 2, ... in order");
    values.push_back(v);
  }
  if (values.empty()) throw UsageError("rate table '" + path + "' is empty");
  return RateFunction::from_table(std::move(values), "user-table");
}

RhoSpec parse_rho(const std::string& spec) {
  if (spec == "uniform") return RhoSpec::uniform();
  if (auto path = inner_argument(spec, "fourier"); !path.empty()) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open Fourier file '" + path + "'");
    std::vector<std::complex<double>> c;
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
      for (auto& ch : line)
        if (ch == ',') ch = ' ';
      std::istringstream row(line);
      double re = 0.0, im = 0.0;
      if (!(row >> re)) throw UsageError("Fourier line '" + line + "' has no value");
      row >> im;
      c.emplace_back(re, im);
    }
    if (c.empty()) throw UsageError("Fourier file '" + path + "' is empty");
    return RhoSpec::from_fourier(std::move(c));
  }
  if (auto expr = inner_argument(spec, "density"); !expr.empty()) {
    std::function<double(double)> f;
    try {
      f = parse_expression(expr);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return RhoSpec::from_density(f);
  }
  throw UsageError("--rho must be uniform, fourier:FILE or density:EXPR");
}

GraphKind parse_graph(const std::string& s) {
  try {
    return parse_graph_kind(s);
  } catch (const Error&) {
    throw UsageError("--graph must be complete or lattice");
  }
}

InteractionGraph make_graph(const RunConfig& c) { return build_graph(parse_graph(c.graph), c.d, c.N); }

std::vector<int> omega_list(const RunConfig& c) {
  if (!c.omega_range.empty()) {
    int a = 0, b = 0;
    char colon = 0;
    std::istringstream s(c.omega_range);
    if (!(s >> a >> colon >> b) || colon != ':' || a < 0 || b < a)
      throw UsageError("--omega-range must be A:B with 0 <= A <= B");
    std::vector<int> v;
    for (int w = a; w <= b; ++w) v.push_back(w);
    return v;
  }
  if (c.omega) {
    const double w = *c.omega;
    if (w < 0 || std::floor(w) != w) throw UsageError("--omega must be a nonnegative integer for discrete models");
    return {static_cast<int>(w)};
  }
  throw UsageError("give --omega or --omega-range");
}

ModelSpec discrete_model(const RunConfig& c) {
  const auto g = parse_g(c.g);
  if (c.model == "zero-range") return ModelSpec::zero_range(g);
  if (c.model == "simple-average") return ModelSpec::simple_average(g);
  throw UsageError("model '" + c.model + "' is not discrete (use zero-range or simple-average)");
}

GammaExchangeSpec exchange_spec(const RunConfig& c, const std::string& ls, const std::string& lr) {
  auto spec = GammaExchangeSpec::simple_average(c.gamma);
  try {
    if (!ls.empty()) spec.lambda_s = parse_expression(ls);
    if (!lr.empty()) spec.lambda_r = parse_expression(lr);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return spec;
}

ModelSpec continuous_model(const RunConfig& c, bool gamma_given, const std::string& ls = {}, const std::string& lr = {}) {
  if (c.model == "kac") return ModelSpec::kac();
  if (c.model == "kac-rho") return ModelSpec::kac_rho(parse_rho(c.rho));
  if (c.model == "gamma-exchange") return ModelSpec::gamma_exchange(exchange_spec(c, ls, lr));
  if (c.model == "simple-average" && gamma_given) return ModelSpec::simple_average_gamma(c.gamma);
  throw UsageError("model '" + c.model + "' has no continuous variant here (simple-average needs --gamma)");
}

std::optional<double> reference_gap(const ModelSpec& m, const InteractionGraph& g) {
  if (g.kind != GraphKind::Complete) return std::nullopt;
  if (m.family == Family::KacUniform) return (g.N + 2.0) / (4.0 * g.N);
  if (m.site.kind == SiteKind::GammaHalfLine &&
      (m.family == Family::SimpleAverage || (m.exchange && m.exchange->is_simple_average()))) {
    const double y = m.gamma_shape();
    return (y * g.N + 1.0) / (g.N * (2.0 * y + 1.0));
  }
  return std::nullopt;
}

// --- subcommands -----------------------------------------------------------

Output cmd_graph(const RunConfig& c) {
  const auto g = make_graph(c);
  Output o;
  o.columns = {"kind", "d", "N", "u", "v"};
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    edges.push_back({e[0], e[1]});
    o.rows.push_back({{"kind", std::string(to_string(g.kind))}, {"d", c.d}, {"N", g.N}, {"u", e[0]}, {"v", e[1]}});
  }
  o.results.push_back({{"graph", graph_json(g)},
                       {"vertex_count", g.vertex_count},
                       {"edge_count", g.edges.size()},
                       {"pair_scaling", g.pair_scaling},
                       {"edges", edges}});
  return o;
}

Output cmd_states(const RunConfig& c, long limit) {
  if (!c.omega) throw UsageError("states needs --omega");
  const auto ws = omega_list(c);
  const StateSet states(c.N, ws.front());
  const auto g = parse_g(c.g);
  const auto m = stationary_weights(g, states);
  Output o;
  o.columns = {"index", "config", "weight"};
  for (std::int64_t i = 0; i < states.size() && i < limit; ++i) {
    const auto s = states[i];
    o.rows.push_back({{"index", i}, {"config", std::vector<int>(s.begin(), s.end())}, {"weight", m.weights(i)}});
  }
  o.results.push_back({{"sites", c.N}, {"omega", ws.front()}, {"count", states.size()}, {"listed", o.rows.size()}, {"states", o.rows}});
  return o;
}

Output cmd_gap_exact(const RunConfig& c) {
  const auto model = discrete_model(c);
  const auto graph = make_graph(c);
  const auto ws = omega_list(c);
  const bool pair = graph.kind == GraphKind::Complete && graph.N == 2;
  std::vector<Json> rows(ws.size());
  parallel_for(static_cast<std::int64_t>(ws.size()), [&](std::int64_t k) {
    const StateSet states(graph.vertex_count, ws[static_cast<std::size_t>(k)]);
    GapOptions opt;
    opt.want_top = pair;
    const auto res = spectral_analysis(build_generator(model, graph, states), opt);
    rows[static_cast<std::size_t>(k)] =
        gap_record(model.id(), graph, ws[static_cast<std::size_t>(k)], res.gap, res.dimension, pair ? &res.top : nullptr);
  });
  Output o;
  o.columns = {"model", "graph.kind", "graph.d", "graph.N", "omega", "gap", "kappa", "dim", "method"};
  for (auto& r : rows) o.rows.push_back(std::move(r));
  o.results = o.rows;
  o.references = {"exact spectral gap of the generator restricted to a conserved-total slice"};
  return o;
}

Output cmd_gap_galerkin(const RunConfig& c, bool gamma_given, const std::string& mode) {
  const auto model = continuous_model(c, gamma_given);
  const auto graph = make_graph(c);
  BasisMode bm;
  if (mode == "full") bm = BasisMode::Full;
  else if (mode == "symmetric") bm = BasisMode::Symmetric;
  else throw UsageError("--mode must be full or symmetric");
  const auto pair = assemble_galerkin(model, graph, 1.0, c.degree, bm);
  const auto res = galerkin_gap(pair);
  Json rec{{"model", std::string(model.id())},
           {"N", graph.N},
           {"omega", 1},
           {"degree", c.degree},
           {"sector", mode},
           {"gap", number(res.gap)},
           {"gram_condition", number(res.gram_condition)},
           {"method", "galerkin"},
           {"graph", graph_json(graph)},
           {"basis_size", pair.basis.size()},
           {"deflated_dimension", res.deflated_dimension}};
  if (model.family == Family::GammaExchange || model.site.kind == SiteKind::GammaHalfLine) rec["gamma"] = c.gamma;
  if (const auto ref = reference_gap(model, graph)) {
    rec["reference"] = *ref;
    rec["matches_reference"] = std::abs(res.gap - *ref) < 1e-8;
  }
  Output o;
  o.columns = {"model", "N", "omega", "degree", "sector", "gap", "gram_condition", "method", "reference", "matches_reference"};
  o.rows.push_back(rec);
  o.results = o.rows;
  o.references = {"sector gap: exact on the invariant polynomial space, an upper bound on the full gap"};
  return o;
}

struct McFlags {
  std::string estimator = "autocorr";
  std::string observable;
  double horizon = 2e4;
  double burn_in = 50.0;
  double stride = 0.05;
  int replicas = 1;
  int inner = 8;
  std::string samples_out;
  std::string lambda_s;
  std::string lambda_r;
};

Output cmd_gap_mc(const RunConfig& c, bool gamma_given, const McFlags& f) {
  const auto graph = make_graph(c);
  const bool discrete = c.model == "zero-range" || (c.model == "simple-average" && !gamma_given);
  const ModelSpec model = discrete ? discrete_model(c) : continuous_model(c, gamma_given, f.lambda_s, f.lambda_r);
  const double omega = c.omega.value_or(discrete ? 3.0 : 1.0);
  if (discrete && std::floor(omega) != omega) throw UsageError("--omega must be an integer for discrete models");

  Observable obs;
  std::optional<double> reference;
  std::string obs_name = f.observable;
  if (obs_name.empty()) obs_name = discrete ? "gap-mode" : (model.law == ConservationLaw::Square ? "power-sum:4" : "power-sum:2");
  if (obs_name == "gap-mode") {
    if (!discrete) throw UsageError("gap-mode observable needs a discrete model");
    auto states = std::make_shared<StateSet>(graph.vertex_count, static_cast<int>(omega));
    const auto gap = spectral_analysis(build_generator(model, graph, *states));
    Eigen::VectorXd mode = gap.eigenvector;
    obs = [states, mode](const Configuration& x) { return mode(states->index_of(x.count)); };
    reference = gap.gap;
  } else if (auto k = inner_argument(obs_name, "power-sum"); !k.empty()) {
    const int p = std::stoi(k);
    obs = [p, discrete](const Configuration& x) {
      double s = 0.0;
      if (discrete) for (int v : x.count) s += std::pow(v, p);
      else for (double v : x.real) s += std::pow(v, p);
      return s;
    };
  } else if (auto k = inner_argument(obs_name, "coordinate"); !k.empty()) {
    const int i = std::stoi(k) - 1;
    if (i < 0 || i >= graph.vertex_count) throw UsageError("coordinate index out of range");
    obs = [i, discrete](const Configuration& x) {
      return discrete ? static_cast<double>(x.count[static_cast<std::size_t>(i)]) : x.real[static_cast<std::size_t>(i)];
    };
  } else {
    throw UsageError("--observable must be gap-mode, power-sum:K or coordinate:I");
  }
  const bool custom_rates = !f.lambda_s.empty() || !f.lambda_r.empty();
  if (!reference && omega == 1.0 && !custom_rates) reference = reference_gap(model, graph);

  EstimatorOptions eo;
  eo.horizon = f.horizon;
  eo.burn_in = f.burn_in;
  eo.stride = f.stride;
  eo.seed = c.seed;
  eo.replicas = f.replicas;
  eo.inner = f.inner;
  eo.omega = omega;
  EstimatorResult r;
  if (f.estimator == "autocorr") r = autocorr_gap_estimate(model, graph, obs, eo);
  else if (f.estimator == "rayleigh") r = rayleigh_upper_bound(model, graph, obs, eo);
  else throw UsageError("--estimator must be autocorr or rayleigh");

  if (!f.samples_out.empty()) {
    SimulateOptions so;
    so.horizon = f.horizon;
    so.burn_in = f.burn_in;
    so.stride = f.stride;
    so.seed = derive_seed(c.seed, 0);
    const auto sim = simulate(model, graph, default_initial(model, graph.vertex_count, omega), {obs}, so);
    Json header{{"format", "gaplab-samples"}, {"version", 1}, {"model", std::string(model.id())},
                {"graph", graph_json(graph)}, {"omega", omega}, {"seed", c.seed}, {"stride", f.stride},
                {"observables", {obs_name}}, {"columns", 1}, {"endianness", "little"}, {"events", sim.events}};
    std::ofstream out(f.samples_out, std::ios::binary);
    if (!out) throw UsageError("cannot write sample file '" + f.samples_out + "'");
    write_samples(out, header.dump(), sim.samples);
  }

  Json rec{{"model", std::string(model.id())}, {"graph", graph_json(graph)}, {"omega", omega},
           {"estimator", f.estimator},          {"observable", obs_name}};
  const Json fit = to_json(r);
  for (auto it = fit.begin(); it != fit.end(); ++it) rec[it.key()] = it.value();
  if (reference) {
    rec["reference"] = *reference;
    rec["covers_reference"] = r.covers(*reference);
  }
  Output o;
  o.columns = {"model", "graph.kind", "graph.d", "graph.N", "omega", "estimator", "observable", "estimate", "std_error",
               "ci", "ess", "samples", "reference", "covers_reference"};
  o.rows.push_back(rec);
  o.results = o.rows;
  o.references = {"Monte Carlo estimate with a 95% block-bootstrap interval"};
  return o;
}

Output cmd_two_site(const RunConfig& c) {
  Output o;
  if (c.model == "kac" || c.model == "kac-rho") {
    const auto rho = c.model == "kac" ? RhoSpec::uniform() : parse_rho(c.rho);
    const auto f = two_site_fourier_gap(rho, c.n_max);
    o.columns = {"n", "value"};
    for (std::size_t n = 0; n < f.modes.size(); ++n) o.rows.push_back({{"n", n + 1}, {"value", f.modes[n]}});
    o.results.push_back({{"model", c.model}, {"lambda2", f.lambda2}, {"kappa", f.kappa}, {"n_max", f.n_max},
                         {"caveat", FourierGap::caveat}, {"modes", o.rows}});
    return o;
  }
  const auto model = discrete_model(c);
  const auto table = two_site_spectrum(model, omega_list(c));
  o.columns = {"omega", "gap", "kappa", "dim"};
  for (const auto& r : table.rows)
    o.rows.push_back({{"omega", r.omega}, {"gap", number(r.gap)}, {"kappa", number(r.kappa)}, {"dim", r.dimension}});
  o.results.push_back({{"model", std::string(model.id())}, {"g", c.g}, {"inf_gap", number(table.inf_gap)},
                       {"sup_kappa", number(table.sup_kappa)}, {"gap_trend", table.gap_trend}, {"rows", o.rows}});
  return o;
}

Output cmd_kernel(const RunConfig& c, int k_max, int k0_max) {
  const auto g = parse_g(c.g);
  const auto k = kernel_spectrum_extremes(g, c.n_max);
  Output o;
  o.columns = {"n", "min", "max", "max_imaginary"};
  Json j = to_json(k);
  o.rows = j["table"];
  j["g"] = g.name();
  j["n_max"] = c.n_max;
  if (k_max > 0) j["lsv"] = to_json(lsv_condition_check(g, k_max, k0_max));
  o.results.push_back(j);
  return o;
}

struct BoundFlags {
  std::string lambda3;
  std::string lambda2;
  std::optional<double> kappa;
  std::optional<double> lambda_star;
  std::string lambda_s;
  double lambda21 = 1.0;
  std::string omega_grid = "0.1,0.5,1,2,5,10";
};

bool is_rational_text(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789/-") == std::string::npos;
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s), 1);
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw UsageError("cannot read '" + s + "' as p/q");
  }
}

double parse_real(const std::string& s) {
  if (is_rational_text(s)) return parse_rational(s).to_double();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("cannot read '" + s + "' as a number");
  }
}

Output cmd_bounds(const RunConfig& c, const BoundFlags& f, bool N_given) {
  Output o;
  o.columns = {"kind", "rule", "inequality", "value", "exact"};
  if (!f.lambda3.empty()) {
    if (f.lambda2.empty()) throw UsageError("certificate needs both --lambda3 and --lambda2");
    const auto chain = (is_rational_text(f.lambda3) && is_rational_text(f.lambda2))
                           ? certificate(parse_rational(f.lambda3), parse_rational(f.lambda2), c.d)
                           : certificate(parse_real(f.lambda3), parse_real(f.lambda2), c.d);
    Json j = to_json(chain);
    for (const auto& s : j["steps"]) {
      Json row = s;
      row["kind"] = "certificate";
      o.rows.push_back(row);
    }
    Json head{{"kind", "certificate"}, {"d", c.d}};
    head.update(j);
    o.results.push_back(head);
    if (N_given) {
      const auto lc = kac_local_constants(c.d, c.N, parse_real(f.lambda2));
      o.results.push_back({{"kind", "local-constants"}, {"d", c.d}, {"N", c.N}, {"kac_bound", lc.kac_bound},
                           {"lambda2", *lc.lambda2}, {"lambda2_bound", *lc.lambda2_bound},
                           {"caputo_bound", caputo_bound(parse_real(f.lambda3), std::max(c.N, 2))}});
    }
  }
  if (f.kappa || f.lambda_star) {
    if (!f.kappa || !f.lambda_star || f.lambda2.empty())
      throw UsageError("sandwich needs --lambda2, --kappa and --lambda-star");
    const auto iv = sandwich(parse_real(f.lambda2), *f.kappa, *f.lambda_star);
    o.results.push_back({{"kind", "sandwich"}, {"interval", {number(iv.lo), number(iv.hi)}}});
    o.rows.push_back({{"kind", "sandwich"}, {"rule", "two-site-sandwich"}, {"inequality", "2λ(2)λ* ≤ λ ≤ 2κλ*"},
                      {"value", Json::array({number(iv.lo), number(iv.hi)})}});
  }
  if (!f.lambda_s.empty()) {
    std::function<double(double)> ls;
    try {
      ls = parse_expression(f.lambda_s);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    std::vector<double> grid;
    std::istringstream s(f.omega_grid);
    std::string item;
    while (std::getline(s, item, ',')) grid.push_back(parse_real(item));
    Json j = to_json(lambda_s_scaling(ls, f.lambda21, grid));
    j["kind"] = "lambda-s-scaling";
    for (const auto& r : j["rows"])
      o.rows.push_back({{"kind", "lambda-s-scaling"}, {"rule", "omega=" + r["omega"].dump()}, {"value", r["lambda2"]}});
    o.results.push_back(j);
  }
  if (o.results.empty()) throw UsageError("bounds needs --lambda3/--lambda2, --kappa/--lambda-star or --lambda-s");
  return o;
}

Output cmd_audit(const RunConfig& c, int draws, bool census) {
  if (!c.omega) throw UsageError("audit needs --omega");
  const auto graph = make_graph(c);
  AuditOptions opt;
  opt.draws = draws;
  opt.seed = c.seed;
  const auto rep = lemma_audit(graph, parse_g(c.g), omega_list(c).front(), opt);
  Output o;
  o.columns = {"instance", "states", "draws", "three_point_violations", "exchange_violations", "path_violations",
               "max_three_point_ratio", "max_exchange_ratio", "max_path_ratio", "exhaustive_three_point",
               "exhaustive_exchange", "exhaustive_path", "passed"};
  o.rows.push_back(to_json(rep));
  o.results = o.rows;
  if (census) {
    if (graph.kind != GraphKind::Lattice) throw UsageError("--census needs --graph lattice");
    Json j = to_json(path_census(c.d, c.N));
    j["kind"] = "path-census";
    o.results.push_back(j);
  }
  return o;
}

void emit(const RunConfig& c, const Output& o) {
  std::ostringstream text;
  if (c.format == "csv") {
    for (std::size_t i = 0; i < o.columns.size(); ++i) text << (i ? "," : "") << o.columns[i];
    text << '\n';
    for (const auto& r : o.rows) text << csv_row(r, o.columns) << '\n';
  } else {
    Json env{{"config", c.to_json()}, {"results", o.results}, {"provenance", {{"references", o.references}, {"tool", "gaplab"}, {"version", "1.0.0"}}}};
    text << env.dump(2) << '\n';
  }
  if (c.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(c.out);
    if (!f) throw UsageError("cannot write '" + c.out + "'");
    f << text.str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaplab: spectral gaps of conservative pair-collision dynamics"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  RunConfig cfg;
  double omega_value = 0.0;
  McFlags mc;
  BoundFlags bf;
  std::string mode = "full";
  long limit = 1000;
  int k_max = 0;
  int k0_max = 5;
  int draws = 200;
  bool census = false;
  bool fast = false;
  std::vector<int> only;

  auto common = [&](CLI::App* s) {
    s->add_option("--out", cfg.out, "Output file (default stdout)");
    s->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto graph_opts = [&](CLI::App* s) {
    s->add_option("--graph", cfg.graph, "complete or lattice")->check(CLI::IsMember({"complete", "lattice"}));
    s->add_option("--d", cfg.d, "Lattice dimension");
    s->add_option("--N", cfg.N, "Sites (complete) or side length (lattice)");
  };
  auto omega_opts = [&](CLI::App* s) {
    s->add_option("--omega", omega_value, "Conserved total");
    s->add_option("--omega-range", cfg.omega_range, "Inclusive integer range A:B");
  };

  auto* graph = app.add_subcommand("graph", "Interaction graph");
  graph_opts(graph);
  common(graph);

  auto* states = app.add_subcommand("states", "Enumerate the configurations of a total on N sites");
  states->add_option("--N", cfg.N, "Sites");
  states->add_option("--omega", omega_value, "Particles")->required();
  states->add_option("--g", cfg.g, "constant-one, identity or user-table:FILE");
  states->add_option("--limit", limit, "List at most this many states");
  common(states);

  auto* gap_exact = app.add_subcommand("gap-exact", "Exact gap of a discrete model");
  gap_exact->add_option("--model", cfg.model, "zero-range or simple-average")->required();
  gap_exact->add_option("--g", cfg.g, "constant-one, identity or user-table:FILE");
  graph_opts(gap_exact);
  omega_opts(gap_exact);
  common(gap_exact);

  auto* gap_galerkin = app.add_subcommand("gap-galerkin", "Polynomial-sector gap of a continuous model");
  gap_galerkin->add_option("--model", cfg.model, "kac, kac-rho, gamma-exchange or simple-average")->required();
  gap_galerkin->add_option("--gamma", cfg.gamma, "Gamma shape");
  gap_galerkin->add_option("--rho", cfg.rho, "uniform, fourier:FILE or density:EXPR");
  gap_galerkin->add_option("--degree", cfg.degree, "Sector degree");
  gap_galerkin->add_option("--mode", mode, "full or symmetric");
  graph_opts(gap_galerkin);
  common(gap_galerkin);

  auto* gap_mc = app.add_subcommand("gap-mc", "Monte Carlo gap estimate");
  gap_mc->add_option("--model", cfg.model, "Catalog model")->required();
  gap_mc->add_option("--g", cfg.g, "Rate function (discrete models)");
  gap_mc->add_option("--gamma", cfg.gamma, "Gamma shape");
  gap_mc->add_option("--rho", cfg.rho, "Angle law for kac-rho");
  gap_mc->add_option("--lambda-s", mc.lambda_s, "Total-energy rate factor (expression in x)");
  gap_mc->add_option("--lambda-r", mc.lambda_r, "Fraction rate factor (expression in x)");
  gap_mc->add_option("--omega", omega_value, "Conserved total");
  gap_mc->add_option("--seed", cfg.seed, "Seed");
  gap_mc->add_option("--estimator", mc.estimator, "autocorr or rayleigh");
  gap_mc->add_option("--observable", mc.observable, "gap-mode, power-sum:K or coordinate:I");
  gap_mc->add_option("--T", mc.horizon, "Horizon per replica");
  gap_mc->add_option("--burn-in", mc.burn_in, "Burn-in time");
  gap_mc->add_option("--stride", mc.stride, "Sampling stride");
  gap_mc->add_option("--replicas", mc.replicas, "Independent replicas");
  gap_mc->add_option("--inner", mc.inner, "Collision draws per edge for the Rayleigh estimator");
  gap_mc->add_option("--samples-out", mc.samples_out, "Write a sample stream file");
  graph_opts(gap_mc);
  common(gap_mc);

  auto* two_site = app.add_subcommand("two-site", "Two-site spectra");
  two_site->add_option("--model", cfg.model, "zero-range, simple-average, kac or kac-rho")->required();
  two_site->add_option("--g", cfg.g, "Rate function");
  two_site->add_option("--rho", cfg.rho, "Angle law");
  two_site->add_option("--n-max", cfg.n_max, "Fourier modes");
  omega_opts(two_site);
  common(two_site);

  auto* kernel = app.add_subcommand("kernel", "Zero-range conditional kernels");
  kernel->add_option("--g", cfg.g, "Rate function");
  kernel->add_option("--n-max", cfg.n_max, "Largest kernel order");
  kernel->add_option("--k-max", k_max, "Also scan the rate conditions up to k-max");
  kernel->add_option("--k0-max", k0_max, "Largest offset in the rate-condition scan");
  common(kernel);

  auto* bounds = app.add_subcommand("bounds", "Bound arithmetic and certificates");
  bounds->add_option("--lambda3", bf.lambda3, "Three-site complete-graph gap (p/q for exact arithmetic)");
  bounds->add_option("--lambda2", bf.lambda2, "Two-site gap");
  bounds->add_option("--kappa", bf.kappa, "Two-site spectral supremum");
  bounds->add_option("--lambda-star", bf.lambda_star, "Simple-average gap for the sandwich");
  bounds->add_option("--lambda-s", bf.lambda_s, "Rate factor Lambda_s as an expression in x");
  bounds->add_option("--lambda21", bf.lambda21, "lambda(2, 1) for the scaling table");
  bounds->add_option("--omega-grid", bf.omega_grid, "Comma-separated totals");
  auto* bounds_N = bounds->add_option("--N", cfg.N, "Also report local constants at this N");
  bounds->add_option("--d", cfg.d, "Lattice dimension");
  common(bounds);

  auto* audit = app.add_subcommand("audit", "Comparison-inequality audits");
  audit->add_option("--g", cfg.g, "Rate function");
  audit->add_option("--omega", omega_value, "Particles")->required();
  audit->add_option("--draws", draws, "Random functions");
  audit->add_option("--seed", cfg.seed, "Seed");
  audit->add_flag("--census", census, "Also report the canonical-path census");
  graph_opts(audit);
  common(audit);

  auto* verify = app.add_subcommand("verify-all", "Run the acceptance suite");
  verify->add_flag("--fast", fast, "Quick mode (the full suite already fits its time budget)");
  verify->add_option("--only", only, "Criterion ids");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (sub->get_option_no_throw("--omega") && sub->get_option("--omega")->count() > 0) cfg.omega = omega_value;
    const bool gamma_given = sub->get_option_no_throw("--gamma") && sub->get_option("--gamma")->count() > 0;

    if (cfg.command == "verify-all") {
      AcceptanceOptions ao;
      ao.fast = fast;
      ao.only.insert(only.begin(), only.end());
      int failed = 0;
      Output o;
      o.columns = {"id", "name", "passed", "seconds", "detail"};
      run_acceptance(ao, [&](const CriterionResult& r) {
        // keep stdout clean when it carries the CSV table
        std::fprintf(cfg.format == "csv" && cfg.out.empty() ? stderr : stdout, "%s\n", format_result(r).c_str());
        std::fflush(stdout);
        if (!r.passed) ++failed;
        o.rows.push_back(to_json(r));
      });
      o.results = o.rows;
      if (!cfg.out.empty() || cfg.format == "csv") emit(cfg, o);
      return failed == 0 ? 0 : 1;
    }

    Output out;
    if (cfg.command == "graph") out = cmd_graph(cfg);
    else if (cfg.command == "states") out = cmd_states(cfg, limit);
    else if (cfg.command == "gap-exact") out = cmd_gap_exact(cfg);
    else if (cfg.command == "gap-galerkin") out = cmd_gap_galerkin(cfg, gamma_given, mode);
    else if (cfg.command == "gap-mc") {
      cfg.extra = {{"estimator", mc.estimator}, {"T", mc.horizon}, {"burn_in", mc.burn_in}, {"stride", mc.stride},
                   {"replicas", mc.replicas}};
      out = cmd_gap_mc(cfg, gamma_given, mc);
    } else if (cfg.command == "two-site") out = cmd_two_site(cfg);
    else if (cfg.command == "kernel") out = cmd_kernel(cfg, k_max, k0_max);
    else if (cfg.command == "bounds") out = cmd_bounds(cfg, bf, bounds_N->count() > 0);
    else if (cfg.command == "audit") out = cmd_audit(cfg, draws, census);
    emit(cfg, out);
    return 0;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
