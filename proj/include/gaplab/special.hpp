#pragma once

namespace gaplab {

/// log B(a, b) via lgamma.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// E[beta^a (1 - beta)^b] for beta ~ Beta(shape, shape), as a product of
/// rising-factorial ratios (exact for integer exponents).
template <class Scalar>
Scalar beta_moment(int a, int b, const Scalar& shape) {
  // Gamma(2g)Gamma(g+a)Gamma(g+b) / (Gamma(g)^2 Gamma(2g+a+b))
  Scalar num(1);
  Scalar den(1);
  for (int t = 0; t < a; ++t) num *= shape + Scalar(t);
  for (int t = 0; t < b; ++t) num *= shape + Scalar(t);
  for (int t = 0; t < a + b; ++t) den *= shape + shape + Scalar(t);
  return num / den;
}

/// Closed-form eigenvalue of the one-site conditional-expectation operator
/// in the Gamma family: (-1)^n Gamma(2g) Gamma(n+g) / (Gamma(g) Gamma(n+2g)).
double k_operator_eigenvalue(int n, double shape);

}  // namespace gaplab
