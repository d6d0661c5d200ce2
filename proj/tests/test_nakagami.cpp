#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "brute_force.hpp"
#include "errors.hpp"
#include "nakagami.hpp"
#include "numerics.hpp"
#include "rng.hpp"

using namespace dnak;
constexpr double kPi = std::numbers::pi;

TEST_CASE("pdf closed-form values") {
    CHECK(nakagami::pdf({1.0, 1.0, 0.0}, 0.0) == 0.0);
    CHECK(nakagami::pdf({1.0, 1.0, 0.0}, 1.0) ==
          doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    // m = 0.5 has a finite limit at the origin
    CHECK(nakagami::pdf({0.5, 2.0, 0.0}, 0.0) ==
          doctest::Approx(std::sqrt(2.0 / (kPi * 2.0))).epsilon(1e-14));
    CHECK_THROWS_AS(nakagami::pdf({1.0, 1.0, 0.0}, -0.1), DomainError);
    CHECK_THROWS_AS(nakagami::pdf({0.3, 1.0, 0.0}, 1.0), DomainError);
    CHECK_THROWS_AS(nakagami::pdf({1.0, -1.0, 0.0}, 1.0), DomainError);
}

TEST_CASE("pdf equals the derivative of cdf") {
    const NakagamiParams p{2.5, 3.0, 0.0};
    const double x = 1.2, h = 1e-6;
    const double fd = (nakagami::cdf(p, x + h) - nakagami::cdf(p, x - h)) / (2.0 * h);
    CHECK(nakagami::pdf(p, x) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("pdf integrates to one") {
    for (double m : {0.5, 1.0, 2.5, 7.0})
        for (double omega : {0.3, 1.0, 10.0}) {
            const NakagamiParams p{m, omega, 0.0};
            const auto r = numerics::integrate_semiinfinite(
                [&p](double x) { return nakagami::pdf(p, x); });
            CHECK(std::fabs(r.value - 1.0) <= 1e-9);
        }
}

TEST_CASE("cdf endpoint, closed form, and quadrature consistency") {
    CHECK(nakagami::cdf({3.0, 2.0, 0.0}, 0.0) == 0.0);
    // m = 1 is the Rayleigh envelope
    CHECK(nakagami::cdf({1.0, 2.0, 0.0}, std::sqrt(2.0)) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));

    auto check_against_quadrature = [](const NakagamiParams& p, double x) {
        const auto q = numerics::integrate_interval(
            [&p](double t) { return nakagami::pdf(p, t); }, 0.0, x);
        CHECK(std::fabs(nakagami::cdf(p, x) - q.value) <= 1e-9);
    };
    check_against_quadrature({3.0, 1.7, 0.0}, 0.9);
    RandomStream rng(404);
    for (int i = 0; i < 8; ++i)
        check_against_quadrature({0.5 + 4.0 * rng.uniform(), 0.3 + 2.0 * rng.uniform(), 0.0},
                                 0.1 + 2.0 * rng.uniform());
    CHECK_THROWS_AS(nakagami::cdf({1.0, 1.0, 0.0}, -1.0), DomainError);
}

TEST_CASE("cdf is monotone") {
    RandomStream rng(11);
    for (int i = 0; i < 50; ++i) {
        const NakagamiParams p{0.5 + 5.0 * rng.uniform(), 0.2 + 3.0 * rng.uniform(), 0.0};
        double a = 3.0 * rng.uniform(), b = 3.0 * rng.uniform();
        if (a > b) std::swap(a, b);
        CHECK(nakagami::cdf(p, a) <= nakagami::cdf(p, b) + 1e-15);
    }
}

TEST_CASE("derivative_std closed form and scalings") {
    CHECK(nakagami::derivative_std({1.0, 1.0, 0.0}) == 0.0);
    CHECK(nakagami::derivative_std({1.0, 1.0, 1.0}) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(nakagami::derivative_std({4.0, 2.0, 10.0}) ==
          doctest::Approx(10.0 * kPi * std::sqrt(0.5)).epsilon(1e-15));

    // exactly linear in the Doppler shift, exactly sqrt-homogeneous in power
    const NakagamiParams p{2.5, 1.7, 3.0};
    CHECK(nakagami::derivative_std({p.m, p.omega, 2.0 * p.doppler_hz}) ==
          2.0 * nakagami::derivative_std(p));
    CHECK(nakagami::derivative_std({p.m, 4.0 * p.omega, p.doppler_hz}) ==
          2.0 * nakagami::derivative_std(p));
}

TEST_CASE("static sampling reproduces the distribution") {
    const std::size_t n = 1000000;

    RandomStream rng(2024);
    const NakagamiParams p1{1.0, 1.0, 0.0};
    const auto s1 = nakagami::sample(p1, rng, n);
    double mean_sq = 0.0;
    for (double v : s1) mean_sq += v * v;
    mean_sq /= static_cast<double>(n);
    CHECK(mean_sq > 0.99);
    CHECK(mean_sq < 1.01);

    RandomStream rng2(2025);
    const NakagamiParams p2{2.0, 1.0, 0.0};
    const auto s2 = nakagami::sample(p2, rng2, n);
    const double d = brute::ks_distance(
        s2, [&p2](double x) { return nakagami::cdf(p2, x); });
    CHECK(d <= 0.002);
}

TEST_CASE("sampling passes a goodness-of-fit gate at n = 1e5") {
    // Kolmogorov critical value at significance 0.001: 1.9495 / sqrt(n)
    RandomStream rng(555);
    const NakagamiParams p{1.5, 2.0, 0.0};
    const auto s = nakagami::sample(p, rng, 100000);
    const double d = brute::ks_distance(s, [&p](double x) { return nakagami::cdf(p, x); });
    CHECK(d <= 1.9495 / std::sqrt(100000.0));
}

TEST_CASE("sampling is deterministic under a fixed seed") {
    RandomStream a(99), b(99);
    const NakagamiParams p{2.0, 1.0, 0.0};
    CHECK(nakagami::sample(p, a, 1) == nakagami::sample(p, b, 1));
    RandomStream c(99), d(99);
    CHECK(nakagami::sample(p, c, 64) == nakagami::sample(p, d, 64));
    CHECK_THROWS_AS(nakagami::sample(p, a, 0), DomainError);
}

TEST_CASE("single-envelope crossing rate: closed form vs slope-density quadrature") {
    // {m, omega, f_d, r, N} from a 40-digit arbitrary-precision run
    static const double table[][5] = {
        {1, 1, 1, 1, 0.9221370088957891168792},
        {2.5, 1.8, 10, 1.1, 9.919812831551301128553},
        {0.5, 2, 3, 0.3, 4.148247180797667742356},
    };
    for (const auto& row : table) {
        const NakagamiParams p{row[0], row[1], row[2]};
        CHECK(nakagami::single_envelope_lcr(p, row[3]) ==
              doctest::Approx(row[4]).epsilon(1e-12));

        // independent route: pdf times the numerically integrated mean
        // positive slope of the Gaussian derivative density
        const double sigma = kPi * row[2] * std::sqrt(row[1] / row[0]);
        const double mean_up = brute::simpson(
            [sigma](double v) {
                return v * std::exp(-v * v / (2.0 * sigma * sigma)) /
                       (std::sqrt(2.0 * kPi) * sigma);
            },
            0.0, 12.0 * sigma, 4000);
        const double oracle = brute::nakagami_pdf_ref(row[0], row[1], row[3]) * mean_up;
        CHECK(nakagami::single_envelope_lcr(p, row[3]) ==
              doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("single-envelope crossing rate edge behavior") {
    const NakagamiParams p{1.0, 1.0, 1.0};
    CHECK(nakagami::single_envelope_lcr(p, 1e-4) > 0.0);
    CHECK(nakagami::single_envelope_lcr(p, 1e-4) < 1e-3);
    CHECK(nakagami::single_envelope_lcr(p, 1e6) == 0.0);           // underflow, no error
    CHECK(nakagami::single_envelope_lcr({1.0, 1.0, 0.0}, 1.0) == 0.0); // static terminal
    CHECK_THROWS_AS(nakagami::single_envelope_lcr(p, 0.0), DomainError);
    CHECK_THROWS_AS(nakagami::single_envelope_lcr(p, -2.0), DomainError);
}
