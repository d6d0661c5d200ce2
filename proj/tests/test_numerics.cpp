#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "brute_force.hpp"
#include "errors.hpp"
#include "numerics.hpp"
#include "rng.hpp"

using namespace dnak;
using numerics::QuadratureSpec;

TEST_CASE("ln_gamma matches high-precision references") {
    // {a, ln Gamma(a)} from a 40-digit arbitrary-precision run
    static const double table[][2] = {
        {0.5, 0.5723649429247000870717},
        {1.5, -0.1207822376352452223455},
        {2.718281828459045, 0.4494617418200674775548},
        {5, 3.178053830347945619647},
        {7.3, 7.147892523022249032777},
        {10, 12.80182748008146961121},
        {25.5, 56.38916764371994674445},
        {50, 144.5657439463448860089},
        {120.75, 456.6147343398068937821},
        {250, 1128.523770872990714198},
        {375.25, 1847.034438932285734789},
        {500, 2605.115850361733892659},
    };
    for (const auto& row : table)
        CHECK(numerics::ln_gamma(row[0]) == doctest::Approx(row[1]).epsilon(1e-12));

    // integer arguments: the value is exactly zero analytically
    CHECK(std::fabs(numerics::ln_gamma(1.0)) < 1e-13);
    CHECK(std::fabs(numerics::ln_gamma(2.0)) < 1e-13);
}

TEST_CASE("ln_gamma satisfies the recurrence ln G(a+1) = ln G(a) + ln a") {
    RandomStream rng(31);
    for (int i = 0; i < 200; ++i) {
        const double a = 0.5 + 99.5 * rng.uniform();
        const double lhs = numerics::ln_gamma(a + 1.0);
        const double rhs = numerics::ln_gamma(a) + std::log(a);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(lhs)));
    }
}

TEST_CASE("ln_gamma rejects arguments outside its domain") {
    CHECK_THROWS_AS(numerics::ln_gamma(0.0), DomainError);
    CHECK_THROWS_AS(numerics::ln_gamma(-3.0), DomainError);
    CHECK_THROWS_AS(numerics::ln_gamma(std::nan("")), DomainError);
    CHECK_THROWS_AS(numerics::ln_gamma(INFINITY), DomainError);
}

TEST_CASE("reg_lower_gamma endpoint and reference values") {
    CHECK(numerics::reg_lower_gamma(2.0, 0.0) == 0.0);
    CHECK(numerics::reg_lower_gamma(1.0, 1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(numerics::reg_lower_gamma(0.5, 700.0) == doctest::Approx(1.0));

    // {a, u, P(a, u)} frozen from a 40-digit arbitrary-precision run
    static const double table[][3] = {
        {0.5, 0.25, 0.5204998778130465376827},
        {2, 0.5, 0.0902040104310498645943},
        {3.5, 2.2, 0.267276916436134759407},
        {0.7, 3.0, 0.9744473877163564859344},
        {4, 4, 0.566529879633291066382},
        {10, 3, 0.00110248813011547974214},
        {10, 20, 0.9950045876916924128338},
        {25, 24.5, 0.4865049163587093234373},
        {0.5, 9, 0.9999779095030014145586},
        {6.5, 0.08, 3.697089719235451469147e-11},
        {100, 95, 0.3173568111697999998802},
    };
    for (const auto& row : table)
        CHECK(numerics::reg_lower_gamma(row[0], row[1]) ==
              doctest::Approx(row[2]).epsilon(1e-12));
}

TEST_CASE("reg_lower_gamma is monotone in u and stays in [0,1]") {
    RandomStream rng(77);
    for (int i = 0; i < 300; ++i) {
        const double a = 0.5 + 20.0 * rng.uniform();
        double u1 = 30.0 * rng.uniform();
        double u2 = 30.0 * rng.uniform();
        if (u1 > u2) std::swap(u1, u2);
        const double p1 = numerics::reg_lower_gamma(a, u1);
        const double p2 = numerics::reg_lower_gamma(a, u2);
        CHECK(p1 >= 0.0);
        CHECK(p2 <= 1.0);
        CHECK(p1 <= p2 + 1e-15);
    }
    CHECK_THROWS_AS(numerics::reg_lower_gamma(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(numerics::reg_lower_gamma(1.0, -0.5), DomainError);
}

TEST_CASE("semi-infinite quadrature reproduces elementary integrals") {
    auto r1 = numerics::integrate_semiinfinite([](double x) { return std::exp(-x); });
    CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r1.err_estimate <= std::max(1e-12, 1e-10 * r1.value));

    auto r2 = numerics::integrate_semiinfinite(
        [](double x) { return x * std::exp(-x * x); });
    CHECK(r2.value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("quadrature agrees with a dense fixed-grid oracle on a crossing-rate integrand") {
    // sqrt(1 + z^2/x^4) x^{2(m_x - m_y)} exp(-(m_x x^2 + m_y z^2 / x^2))
    // with m_x = 2, m_y = 1.5, z = 0.7 and unit derivative scales
    const double z = 0.7;
    auto integrand = [z](double x) {
        const double e = -(2.0 * x * x + 1.5 * z * z / (x * x));
        if (e < -745.0) return 0.0;
        return std::sqrt(1.0 + z * z / (x * x * x * x)) * x * std::exp(e);
    };
    const auto r = numerics::integrate_semiinfinite(integrand);

    const double oracle = brute::riemann_midpoint(integrand, 0.0, 40.0, 10000000);
    CHECK(std::fabs(r.value - oracle) <= 1e-8 * oracle);

    // same quantity from a 40-digit arbitrary-precision run
    CHECK(r.value == doctest::Approx(0.07117399311153967239998).epsilon(1e-10));
}

TEST_CASE("quadrature is linear in the integrand") {
    RandomStream rng(5);
    for (int i = 0; i < 10; ++i) {
        const double alpha = 4.0 * rng.uniform() - 2.0;
        const double beta = 4.0 * rng.uniform() - 2.0;
        auto f1 = [](double x) { return std::exp(-x); };
        auto f2 = [](double x) { return x * std::exp(-x * x); };
        const double i1 = numerics::integrate_semiinfinite(f1).value;
        const double i2 = numerics::integrate_semiinfinite(f2).value;
        const double mix = numerics::integrate_semiinfinite(
            [&](double x) { return alpha * f1(x) + beta * f2(x); }).value;
        CHECK(std::fabs(mix - (alpha * i1 + beta * i2)) <= 1e-9);
    }
}

TEST_CASE("exhausting the subdivision budget reports the best estimate") {
    QuadratureSpec tight;
    tight.max_subdivisions = 1;
    tight.rel_tol = 1e-14;
    tight.abs_tol = 1e-14;
    bool thrown = false;
    try {
        numerics::integrate_semiinfinite(
            [](double x) { return std::exp(-x) * (1.0 + 0.5 * std::sin(40.0 * x)); },
            tight);
    } catch (const ConvergenceError& e) {
        thrown = true;
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.err_bound > 0.0);
    }
    CHECK(thrown);
}

TEST_CASE("non-finite integrand values and invalid specs are rejected") {
    CHECK_THROWS_AS(numerics::integrate_semiinfinite(
                        [](double x) { return std::sqrt(x - 1.0) * std::exp(-x); }),
                    DomainError);

    QuadratureSpec bad;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(numerics::integrate_semiinfinite([](double) { return 0.0; }, bad),
                    DomainError);
    bad = QuadratureSpec{};
    bad.max_subdivisions = 0;
    CHECK_THROWS_AS(numerics::integrate_semiinfinite([](double) { return 0.0; }, bad),
                    DomainError);
    bad = QuadratureSpec{};
    bad.rel_tol = -1.0;
    CHECK_THROWS_AS(numerics::integrate_semiinfinite([](double) { return 0.0; }, bad),
                    DomainError);
}

TEST_CASE("finite-interval quadrature") {
    const auto r = numerics::integrate_interval(
        [](double x) { return std::cos(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(numerics::integrate_interval([](double) { return 0.0; }, 1.0, 0.0),
                    DomainError);
}
