#ifndef ELA_SPECIAL_FUNCTIONS_HPP
#define ELA_SPECIAL_FUNCTIONS_HPP

namespace ela {

// Shape parameters of a Beta distribution. Both must be positive.
struct BetaParams {
  double alpha;
  double beta;
};

// Shape/scale parameters of a Gamma distribution. Both must be positive.
struct GammaParams {
  double alpha;  // shape
  double beta;   // scale
};

// Rate parameter of an Exponential distribution. Must be positive.
struct ExpParams {
  double lambda;
};

// ln Gamma(x) for x > 0, Lanczos approximation (relative error ~1e-14).
double log_gamma(double x);

// Complete Beta function B(alpha, beta) = Gamma(a)Gamma(b)/Gamma(a+b),
// evaluated in log space to avoid overflow.
double beta_fn(const BetaParams& p);

// Regularized incomplete beta I_x(alpha, beta), evaluated by the
// continued-fraction expansion with the symmetry switch at
// x > (alpha+1)/(alpha+beta+2). Inputs outside [0,1] clamp to {0,1}.
double beta_cdf(double x, const BetaParams& p);

// Regularized lower incomplete gamma P(alpha, x/beta) for x >= 0.
double gamma_cdf(double x, const GammaParams& p);

// 1 - exp(-lambda*x) for x >= 0.
double exp_cdf(double x, const ExpParams& p);

// Standard normal CDF Phi(x).
double normal_cdf(double x);

}  // namespace ela

#endif  // ELA_SPECIAL_FUNCTIONS_HPP
