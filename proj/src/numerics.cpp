#include "numerics.hpp"
#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace dnak::numerics {

namespace {

constexpr double kHalfLog2Pi = 0.918938533204672741780329736406;

// B_{2j} / (2j (2j-1)) for the Stirling-De Moivre series
constexpr double kStirlingCoef[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    7.0 / 1092.0,
    -3617.0 / 122400.0,
};

// Gauss-Kronrod 7/15 pair on [-1, 1]. Nodes xgk[1], xgk[3], xgk[5] and the
// center carry the embedded 7-point Gauss rule with weights wg.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Segment {
    double a, b;
    double integral;
    double err;
};

// Single G7/K15 evaluation with the QUADPACK-style error estimate.
Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    const double fc = f(center);
    fv[14] = fc;
    for (int i = 0; i < 7; ++i) {
        fv[2 * i] = f(center - half * kXgk[i]);
        fv[2 * i + 1] = f(center + half * kXgk[i]);
    }
    for (double v : fv) {
        if (!std::isfinite(v))
            throw DomainError("integrand returned a non-finite value");
    }

    double resk = kWgk[7] * fc;
    double resabs = std::fabs(resk);
    for (int i = 0; i < 7; ++i) {
        const double sum = fv[2 * i] + fv[2 * i + 1];
        resk += kWgk[i] * sum;
        resabs += kWgk[i] * (std::fabs(fv[2 * i]) + std::fabs(fv[2 * i + 1]));
    }
    double resg = kWg[3] * fc;
    for (int i = 0; i < 3; ++i)
        resg += kWg[i] * (fv[2 * (2 * i + 1)] + fv[2 * (2 * i + 1) + 1]);

    const double mean = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::fabs(fv[2 * i] - mean) + std::fabs(fv[2 * i + 1] - mean));

    const double integral = resk * half;
    resabs *= std::fabs(half);
    resasc *= std::fabs(half);

    double err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps))
        err = std::max(eps * 50.0 * resabs, err);

    return {a, b, integral, err};
}

QuadResult adaptive(const std::function<double(double)>& f, double a, double b,
                    const QuadratureSpec& spec) {
    std::vector<Segment> segs;
    segs.push_back(gk15(f, a, b));

    auto total = [&segs] {
        double v = 0.0, e = 0.0;
        for (const Segment& s : segs) {
            v += s.integral;
            e += s.err;
        }
        return QuadResult{v, e};
    };

    QuadResult cur = total();
    int splits = 0;
    while (cur.err_estimate > std::max(spec.abs_tol, spec.rel_tol * std::fabs(cur.value))) {
        if (splits >= spec.max_subdivisions)
            throw ConvergenceError("quadrature failed to converge within max_subdivisions",
                                   cur.value, cur.err_estimate);
        auto worst = std::max_element(segs.begin(), segs.end(),
                                      [](const Segment& x, const Segment& y) {
                                          return x.err < y.err;
                                      });
        const double wa = worst->a, wb = worst->b;
        const double mid = 0.5 * (wa + wb);
        if (mid <= wa || mid >= wb)
            throw ConvergenceError("quadrature interval too small to refine further",
                                   cur.value, cur.err_estimate);
        *worst = gk15(f, wa, mid);
        segs.push_back(gk15(f, mid, wb));
        ++splits;
        cur = total();
    }
    return cur;
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
        throw DomainError("QuadratureSpec: abs_tol must be positive");
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol))
        throw DomainError("QuadratureSpec: rel_tol must be positive");
    if (max_subdivisions < 1)
        throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
}

double ln_gamma(double a) {
    if (!std::isfinite(a) || a <= 0.0)
        throw DomainError("ln_gamma: argument must be positive and finite");
    // Shift the argument above 15, where the asymptotic series converges to
    // full double precision, then undo the shift with the recurrence.
    double shift = 0.0;
    double x = a;
    while (x < 15.0) {
        shift += std::log(x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 0.0;
    double p = inv;
    for (double c : kStirlingCoef) {
        series += c * p;
        p *= inv2;
    }
    return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series - shift;
}

double reg_lower_gamma(double a, double u) {
    if (!std::isfinite(a) || a <= 0.0)
        throw DomainError("reg_lower_gamma: a must be positive and finite");
    if (!std::isfinite(u) || u < 0.0)
        throw DomainError("reg_lower_gamma: u must be nonnegative and finite");
    if (u == 0.0) return 0.0;

    const double log_lead = a * std::log(u) - u - ln_gamma(a);

    if (u < a + 1.0) {
        // Lower series: P = u^a e^-u / Gamma(a) * sum_{n>=0} u^n / (a (a+1)...(a+n))
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 1000; ++n) {
            term *= u / (a + n);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return std::min(1.0, sum * std::exp(log_lead));
    }

    // Upper continued fraction (modified Lentz) for Q = 1 - P
    const double tiny = 1e-300;
    double b = u + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    const double q = std::exp(log_lead) * h;
    return std::clamp(1.0 - q, 0.0, 1.0);
}

QuadResult integrate_interval(const std::function<double(double)>& f,
                              double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw DomainError("integrate_interval: require finite a < b");
    return adaptive(f, a, b, spec);
}

QuadResult integrate_semiinfinite(const std::function<double(double)>& f,
                                  const QuadratureSpec& spec) {
    spec.validate();
    auto transformed = [&f](double t) {
        const double om = 1.0 - t;
        const double x = t / om;
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        return fx / (om * om);
    };
    return adaptive(transformed, 0.0, 1.0, spec);
}

} // namespace dnak::numerics
