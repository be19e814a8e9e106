#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gaplab/acceptance.hpp"
#include "gaplab/audit.hpp"
#include "gaplab/bounds.hpp"
#include "gaplab/galerkin.hpp"
#include "gaplab/paths.hpp"
#include "gaplab/simulator.hpp"
#include "gaplab/two_site.hpp"

namespace gaplab {

using Json = nlohmann::ordered_json;

/// Finite values as numbers, +inf as the string "inf", -inf as "-inf",
/// NaN as null.
Json number(double v);

Json graph_json(const InteractionGraph& g);
Json to_json(const BoundChain& chain);
Json to_json(const PathCensus& census);
Json to_json(const AuditReport& report);
Json to_json(const EstimatorResult& r);
Json to_json(const KernelExtremes& k);
Json to_json(const LsvReport& r);
Json to_json(const ScalingTable& t);
Json to_json(const CriterionResult& r);
Json to_json(const ValidationReport& r);

/// Record of an exact gap computation.
Json gap_record(std::string_view model, const InteractionGraph& g, int omega, double gap, Eigen::Index dim,
                const double* kappa = nullptr);

/// Flattens a record to the given columns; nested objects are addressed as
/// "outer.inner", arrays are joined with spaces.
std::string csv_row(const Json& record, const std::vector<std::string>& columns);
std::string csv_escape(const std::string& field);

}  // namespace gaplab
