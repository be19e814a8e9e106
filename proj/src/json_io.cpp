#include "gaplab/json_io.hpp"

#include <cmath>
#include <sstream>

namespace gaplab {

Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json graph_json(const InteractionGraph& g) {
  return Json{{"kind", std::string(to_string(g.kind))}, {"d", g.kind == GraphKind::Complete ? 1 : g.d}, {"N", g.N}};
}

Json gap_record(std::string_view model, const InteractionGraph& g, int omega, double gap, Eigen::Index dim,
                const double* kappa) {
  Json j{{"model", std::string(model)}, {"graph", graph_json(g)}, {"omega", omega}, {"gap", number(gap)}};
  if (kappa) j["kappa"] = number(*kappa);
  j["dim"] = dim;
  j["method"] = "exact";
  return j;
}

Json to_json(const BoundChain& chain) {
  Json inputs = Json::object();
  for (const auto& in : chain.inputs) {
    Json v{{"value", number(in.value)}, {"source", in.source}};
    if (!in.exact.empty()) v["exact"] = in.exact;
    inputs[in.name] = v;
  }
  Json steps = Json::array();
  for (const auto& s : chain.steps) {
    Json v{{"rule", s.rule}, {"inequality", s.inequality}, {"value", number(s.value)}};
    if (!s.exact.empty()) v["exact"] = s.exact;
    steps.push_back(v);
  }
  return Json{{"inputs", inputs},
              {"steps", steps},
              {"interval", Json::array({number(chain.interval.lo), number(chain.interval.hi)})},
              {"grid", chain.grid}};
}

Json to_json(const PathCensus& c) {
  Json edges = Json::array();
  for (const auto& e : c.edges)
    edges.push_back({{"edge", {e.edge[0], e.edge[1]}}, {"congestion", e.congestion}, {"weighted", e.weighted}});
  return Json{{"d", c.d},
              {"N", c.N},
              {"max_length", c.max_length},
              {"max_congestion", c.max_congestion},
              {"max_weighted", c.max_weighted},
              {"weighted_bound", c.weighted_bound},
              {"bound_holds", c.bound_holds},
              {"edges", edges}};
}

Json to_json(const AuditReport& r) {
  Json j{{"instance", r.label},
         {"states", r.states},
         {"draws", r.draws},
         {"triple_checks", r.triple_checks},
         {"pair_checks", r.pair_checks},
         {"path_checks", r.path_checks},
         {"three_point_violations", r.three_point_violations},
         {"exchange_violations", r.exchange_violations},
         {"path_violations", r.path_violations},
         {"max_three_point_ratio", number(r.max_three_point_ratio)},
         {"max_exchange_ratio", number(r.max_exchange_ratio)},
         {"max_path_ratio", number(r.max_path_ratio)},
         {"exhaustive_three_point", number(r.exhaustive_three_point)},
         {"exhaustive_exchange", number(r.exhaustive_exchange)},
         {"exhaustive_path", number(r.exhaustive_path)},
         {"passed", r.passed()}};
  if (!r.witness_rule.empty()) {
    j["witness_rule"] = r.witness_rule;
    j["witness"] = std::vector<double>(r.witness.data(), r.witness.data() + r.witness.size());
  }
  return j;
}

Json to_json(const EstimatorResult& r) {
  return Json{{"estimate", number(r.estimate)},   {"std_error", number(r.std_error)},
              {"ci", {number(r.ci_lo), number(r.ci_hi)}}, {"ess", number(r.ess)},
              {"samples", r.samples},             {"lag_window", {number(r.lag_lo), number(r.lag_hi)}},
              {"fit_residual", number(r.residual)}, {"caveat", r.caveat}};
}

Json to_json(const KernelExtremes& k) {
  Json rows = Json::array();
  for (const auto& row : k.table)
    rows.push_back({{"n", row.n}, {"min", number(row.min)}, {"max", number(row.max)}, {"max_imaginary", number(row.max_imaginary)}});
  return Json{{"mu1", number(k.mu1)}, {"mu2", number(k.mu2)}, {"last_increment", number(k.last_increment)}, {"table", rows}};
}

Json to_json(const LsvReport& r) {
  Json by = Json::array();
  for (double v : r.gap_by_k0) by.push_back(number(v));
  return Json{{"k_max", r.k_max},         {"increment_sup", number(r.increment_sup)},
              {"gap_by_k0", by},          {"best_k0", r.best_k0},
              {"best_c", number(r.best_c)}, {"holds_on_range", r.holds_on_range},
              {"caveat", LsvReport::caveat}};
}

Json to_json(const ScalingTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back({{"omega", number(r.omega)}, {"lambda2", number(r.lambda2)}});
  Json j{{"rows", rows}, {"inf", number(t.inf)}, {"argmin", number(t.argmin)}, {"degenerate", t.degenerate}};
  if (!t.warning.empty()) j["warning"] = t.warning;
  return j;
}

Json to_json(const CriterionResult& r) {
  return Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}};
}

Json to_json(const ValidationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"residual", number(c.residual)}});
  return Json{{"passed", r.passed()}, {"checks", checks}};
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    std::ostringstream s;
    s.precision(17);
    s << v.get<double>();
    return s.str();
  }
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) out += (out.empty() ? "" : " ") + scalar_text(e);
    return out;
  }
  return v.dump();
}

}  // namespace

std::string csv_row(const Json& record, const std::vector<std::string>& columns) {
  std::string line;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const Json* v = &record;
    std::string path = columns[i];
    std::size_t start = 0;
    while (v && start <= path.size()) {
      const auto dot = path.find('.', start);
      const auto key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      v = (v->is_object() && v->contains(key)) ? &(*v)[key] : nullptr;
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (i) line += ',';
    if (v) line += csv_escape(scalar_text(*v));
  }
  return line;
}

}  // namespace gaplab
