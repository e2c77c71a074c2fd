#pragma once

// Test-side reference computations, independent of the library's continued
// fraction: closed-form t tails for df 1 and 2, and adaptive Simpson
// quadrature of the t density for everything else.

#include <cmath>
#include <functional>

namespace oracle {

constexpr double kPi = 3.14159265358979323846;

inline double t_density(double u, double df) {
    const double log_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                            0.5 * std::log(df * kPi);
    return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(u * u / df));
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double eps,
                            int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, eps, 48);
}

/// P(T > t) by integrating the density over [0, t] and subtracting from
/// the half mass; valid for t >= 0.
inline double t_survival_quadrature(double t, double df) {
    if (t == 0.0) {
        return 0.5;
    }
    const double body =
        integrate([df](double u) { return t_density(u, df); }, 0.0, t, 1e-13);
    return 0.5 - body;
}

inline double t_survival_df1(double t) { return 0.5 - std::atan(t) / kPi; }

inline double t_survival_df2(double t) {
    return 0.5 * (1.0 - t / std::sqrt(t * t + 2.0));
}

}  // namespace oracle
