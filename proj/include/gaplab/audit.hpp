#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "gaplab/model.hpp"

namespace gaplab {

struct AuditOptions {
  int draws = 200;
  std::uint64_t seed = 20240611;
  bool exhaustive = true;  // generalized-eigenvalue worst cases over all functions
  double tolerance = 1e-10;
};

/// Results of checking, for the simple-average pair operators of a discrete
/// instance,
///   three-point: nu((D_xy f)^2) <= 6 nu((pi_xz f - f)^2) + 3 nu((D_zy f)^2), y != z
///   exchange:    nu((pi_xy f - f)^2) <= 4 nu((D_xy f)^2)
///   path:        nu((D_xy f)^2) <= 96 n(x,y) sum_i nu((D_{z_i z_{i+1}} f)^2)   (lattice only)
/// Ratios are LHS / RHS with the constants 6, 3 folded into the RHS, so the
/// three-point ratio must stay <= 1, the exchange ratio <= 4 and the path
/// ratio (LHS over n sum) <= 96.
struct AuditReport {
  std::string label;
  std::int64_t states = 0;
  int draws = 0;
  std::int64_t triple_checks = 0;
  std::int64_t pair_checks = 0;
  std::int64_t path_checks = 0;
  std::int64_t three_point_violations = 0;
  std::int64_t exchange_violations = 0;
  std::int64_t path_violations = 0;
  double max_three_point_ratio = 0.0;
  double max_exchange_ratio = 0.0;
  double max_path_ratio = 0.0;
  double exhaustive_three_point = NAN;
  double exhaustive_exchange = NAN;
  double exhaustive_path = NAN;
  std::string witness_rule;
  Eigen::VectorXd witness;

  bool passed() const {
    return three_point_violations == 0 && exchange_violations == 0 && path_violations == 0 &&
           !(exhaustive_three_point > 1.0 + 1e-9) && !(exhaustive_exchange > 4.0 + 1e-9) &&
           !(exhaustive_path > 96.0 + 1e-9);
  }
};

AuditReport lemma_audit(const InteractionGraph& graph, const RateFunction& g, int omega, const AuditOptions& options = {});

/// Same checks for one explicit function (no random draws, no exhaustive pass).
AuditReport lemma_audit_function(const InteractionGraph& graph, const RateFunction& g, int omega,
                                 const Eigen::VectorXd& f);

}  // namespace gaplab
