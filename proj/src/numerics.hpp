#ifndef DNAK_NUMERICS_HPP
#define DNAK_NUMERICS_HPP

#include <functional>

namespace dnak::numerics {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 200;

    void validate() const; // throws DomainError
};

struct QuadResult {
    double value;
    double err_estimate;
};

/// ln Gamma(a) for a > 0, relative error below 1e-12 on [0.5, 500].
double ln_gamma(double a);

/// Regularized lower incomplete gamma P(a, u) = gamma(a, u) / Gamma(a).
/// Monotone nondecreasing in u; P(a, 0) = 0, P(a, inf) = 1.
double reg_lower_gamma(double a, double u);

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
QuadResult integrate_interval(const std::function<double(double)>& f,
                              double a, double b,
                              const QuadratureSpec& spec = {});

/// Integral of f over (0, inf). The substitution x = t/(1-t) maps the
/// half-line onto (0, 1) before adaptive subdivision. On failure to meet the
/// tolerance a ConvergenceError carries the best estimate and its bound.
QuadResult integrate_semiinfinite(const std::function<double(double)>& f,
                                  const QuadratureSpec& spec = {});

} // namespace dnak::numerics

#endif
