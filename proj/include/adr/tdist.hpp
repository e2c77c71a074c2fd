#pragma once

namespace adr {

/// log of the complete beta function B(a, b), a > 0, b > 0.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
/// Continued-fraction evaluation with the symmetry switch at
/// x > (a+1)/(a+b+2); convergence tolerance 1e-14 within 300 iterations,
/// otherwise NoConvergence (never a silent approximation).
double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail P(T > t) of Student's t with df degrees of freedom, via
/// I_x(df/2, 1/2) at x = df/(df + t*t). Absolute accuracy 1e-10 or better
/// for df <= 1e4, |t| <= 1e3. Throws InvalidDf for df <= 0 or non-finite.
double t_survival(double t, double df);

}  // namespace adr
