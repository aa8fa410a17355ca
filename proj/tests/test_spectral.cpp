#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "postcon/rng.hpp"
#include "postcon/spectral.hpp"

using namespace postcon;

namespace {

SpectralField random_field(std::size_t n, Rng& rng, double amp = 1.0) {
    SpectralField x = SpectralField::zeros(n);
    for (auto& c : x.coeffs) c = amp * standard_normal(rng);
    return x;
}

// Brute-force reference: extended-precision direct summation.
long double norm_t_reference(const SpectralField& x, long double t, const ScaleSpec& scale) {
    long double acc = 0.0L;
    for (std::size_t k = 1; k <= x.trunc(); ++k) {
        const long double lam = static_cast<long double>(scale.eigenvalue(k));
        acc += powl(lam, -2.0L * t) * static_cast<long double>(x.coeffs[k - 1]) *
               static_cast<long double>(x.coeffs[k - 1]);
    }
    return sqrtl(acc);
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("norm_t: single mode, power law") {
    const ScaleSpec scale = ScaleSpec::power(1.0);
    SpectralField x = SpectralField::zeros(2);
    x[1] = 1.0;  // second mode, lambda_2 = 1/2
    CHECK(norm_t(x, 2.0, scale) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(norm_t(x, 0.0, scale) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm_t: t = 0 is the Euclidean norm") {
    Rng rng = make_stream(11);
    const ScaleSpec scale = ScaleSpec::power(1.7);
    const SpectralField x = random_field(40, rng);
    double eu = 0.0;
    for (double c : x.coeffs) eu += c * c;
    CHECK(norm_t(x, 0.0, scale) == doctest::Approx(std::sqrt(eu)).epsilon(1e-14));
}

TEST_CASE("norm_t: 50-mode field matches the brute-force oracle") {
    Rng rng = make_stream(12);
    const ScaleSpec scale = ScaleSpec::power(1.0);
    const SpectralField x = random_field(50, rng);
    const double got = norm_t(x, 1.3, scale);
    const double expected = static_cast<double>(norm_t_reference(x, 1.3L, scale));
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("norm_t rejects non-finite coefficients") {
    const ScaleSpec scale = ScaleSpec::power(1.0);
    SpectralField x = SpectralField::zeros(3);
    x[1] = std::nan("");
    CHECK_THROWS_AS(norm_t(x, 1.0, scale), std::invalid_argument);
}

TEST_CASE("inner_t is the polarization of norm_t") {
    Rng rng = make_stream(13);
    const ScaleSpec scale = ScaleSpec::power(0.8);
    const SpectralField x = random_field(20, rng);
    const double n = norm_t(x, 1.0, scale);
    CHECK(inner_t(x, x, 1.0, scale) == doctest::Approx(n * n).epsilon(1e-13));
}

TEST_CASE("interpolation_gap: eigenvector and zero-field equality cases") {
    const ScaleSpec scale = ScaleSpec::power(1.0);
    SpectralField x = SpectralField::zeros(5);
    x[2] = 3.0;
    CHECK(interpolation_gap(x, 0.0, 1.0, 2.0, scale) == doctest::Approx(0.0).epsilon(1e-13));
    const SpectralField z = SpectralField::zeros(5);
    CHECK(interpolation_gap(z, 0.0, 1.0, 2.0, scale) == 0.0);
}

TEST_CASE("interpolation_gap: two-mode field against the direct formula") {
    const ScaleSpec scale = ScaleSpec::power(1.0);
    SpectralField x = SpectralField::zeros(2);
    x[0] = 1.0;
    x[1] = 1.0;
    // ||x||_0 = sqrt(2), ||x||_1 = sqrt(5), ||x||_2 = sqrt(17)
    const double expected = std::sqrt(std::sqrt(2.0) * std::sqrt(17.0)) - std::sqrt(5.0);
    const double gap = interpolation_gap(x, 0.0, 1.0, 2.0, scale);
    CHECK(gap == doctest::Approx(expected).epsilon(1e-13));
    CHECK(gap > 0.1);
}

TEST_CASE("interpolation_gap rejects disordered indices") {
    const ScaleSpec scale = ScaleSpec::power(1.0);
    const SpectralField x = SpectralField::zeros(5);
    CHECK_THROWS_AS(interpolation_gap(x, 1.0, 1.0, 2.0, scale), std::invalid_argument);
    CHECK_THROWS_AS(interpolation_gap(x, 0.0, 2.0, 2.0, scale), std::invalid_argument);
}

TEST_CASE("interpolation inequality holds on random fields") {
    Rng rng = make_stream(14);
    const ScaleSpec scale = ScaleSpec::power(1.0);
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 1 + static_cast<std::size_t>(uniform01(rng) * 30);
        const SpectralField x = random_field(n, rng, 2.0);
        const double q = -1.0 + 2.0 * uniform01(rng);
        const double r = q + 0.1 + uniform01(rng);
        const double s = r + 0.1 + uniform01(rng);
        const double nr = norm_t(x, r, scale);
        CHECK(interpolation_gap(x, q, r, s, scale) >= -1e-12 * nr);
    }
}

TEST_CASE("norm_t is nondecreasing in t when lambda_1 <= 1") {
    Rng rng = make_stream(15);
    const ScaleSpec scale = ScaleSpec::power(1.3);  // lambda_1 = 1
    for (int it = 0; it < 50; ++it) {
        const SpectralField x = random_field(24, rng);
        const double t1 = -1.0 + 3.0 * uniform01(rng);
        const double t2 = t1 + 2.0 * uniform01(rng);
        CHECK(norm_t(x, t2, scale) >= norm_t(x, t1, scale) * (1.0 - 1e-13));
    }
}

TEST_CASE("Parseval: norm_0 squared equals the coefficient sum of squares") {
    Rng rng = make_stream(16);
    const ScaleSpec scale = ScaleSpec::power(2.0);
    const SpectralField x = random_field(64, rng);
    double ss = 0.0;
    for (double c : x.coeffs) ss += c * c;
    const double n0 = norm_t(x, 0.0, scale);
    CHECK(n0 * n0 == doctest::Approx(ss).epsilon(1e-14));
}

TEST_CASE("trace_sigma0: closed forms") {
    CHECK(trace_sigma0(ScaleSpec::power(1.0)) == doctest::Approx(0.5));
    CHECK(trace_sigma0(ScaleSpec::power(2.0)) == doctest::Approx(0.25));
    CHECK(trace_sigma0(ScaleSpec::dirichlet_laplacian(1.0, 2)) == doctest::Approx(1.0));
    CHECK(trace_sigma0(ScaleSpec::dirichlet_laplacian(2.0, 1)) == doctest::Approx(0.25));
    CHECK(ScaleSpec::power(1.0).sigma0() == doctest::Approx(0.5));
}

TEST_CASE("trace_sigma0: geometric explicit list is trace-class for all sigma") {
    std::vector<double> lam(64);
    for (std::size_t k = 0; k < lam.size(); ++k) lam[k] = std::pow(2.0, -static_cast<double>(k + 1));
    CHECK(trace_sigma0(ScaleSpec::explicit_list(lam)) == 0.0);
}

TEST_CASE("trace_sigma0: algebraic explicit list is extrapolated") {
    std::vector<double> lam(128);
    for (std::size_t k = 0; k < lam.size(); ++k)
        lam[k] = std::pow(static_cast<double>(k + 1), -1.5);
    const double s0 = trace_sigma0(ScaleSpec::explicit_list(lam));
    CHECK(s0 == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}

TEST_CASE("trace_sigma0: refuses short explicit lists") {
    std::vector<double> lam = {1.0, 0.5, 0.33, 0.25, 0.2, 0.17, 0.14, 0.12};
    CHECK_THROWS_AS(trace_sigma0(ScaleSpec::explicit_list(lam)), std::invalid_argument);
}

TEST_CASE("ScaleSpec: dirichlet d=1 uses the exact sine spectrum") {
    const ScaleSpec s = ScaleSpec::dirichlet_laplacian(2.0, 1);
    CHECK(s.eigenvalue(3) == doctest::Approx(std::pow(3.0 * 3.14159265358979323846, -2.0)));
}

TEST_CASE("ScaleSpec: explicit list must be positive nonincreasing") {
    CHECK_THROWS_AS(ScaleSpec::explicit_list({1.0, 1.2, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(ScaleSpec::explicit_list({1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("sample_noise: unit first mode has unit variance") {
    const ScaleSpec scale = ScaleSpec::power(1.0);
    Rng rng = make_stream(17);
    const std::size_t n = 100000;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const SpectralField xi = sample_noise(scale, 1, rng);
        ss += xi[0] * xi[0];
    }
    const double var = ss / n;
    const double se = std::sqrt(2.0 / n);
    CHECK(std::abs(var - 1.0) < 3.0 * se);
}

TEST_CASE("sample_noise: norm_{1-sigma} stabilizes above sigma0, diverges below") {
    const ScaleSpec scale = ScaleSpec::power(1.0);  // sigma0 = 0.5
    Rng rng = make_stream(18);
    const std::size_t draws = 2000;
    auto mc_mean = [&](double sigma, std::size_t trunc) {
        double acc = 0.0;
        for (std::size_t i = 0; i < draws; ++i) {
            const SpectralField xi = sample_noise(scale, trunc, rng);
            const double nn = norm_t(xi, 1.0 - sigma, scale);
            acc += nn * nn;
        }
        return acc / draws;
    };
    auto analytic_tail = [&](double sigma, std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t k = lo + 1; k <= hi; ++k)
            acc += std::pow(static_cast<double>(k), -2.0 * sigma);
        return acc;
    };

    SUBCASE("sigma = 0.6 > sigma0") {
        const double m1 = mc_mean(0.6, 1024);
        const double m2 = mc_mean(0.6, 4096);
        const double se = std::sqrt(2.0 * 1.3 / draws);  // Var ~ 2 sum k^-2.4 < 2*1.3
        CHECK(std::abs(m2 - m1) <= analytic_tail(0.6, 1024, 4096) + 6.0 * se);
    }
    SUBCASE("sigma = 0.4 < sigma0") {
        const double m1 = mc_mean(0.4, 256);
        const double m2 = mc_mean(0.4, 4096);
        const double se = std::sqrt(2.0 * 2.4 / draws);
        CHECK(m2 - m1 > analytic_tail(0.4, 256, 4096) - 6.0 * se);
        CHECK(m2 - m1 > 5.0);  // grows without bound in the truncation
    }
}

TEST_CASE("noise regularity: analytic partial sums are Cauchy at sigma0 + 0.1") {
    const ScaleSpec scale = ScaleSpec::power(1.0);
    const double sigma = trace_sigma0(scale) + 0.1;
    auto partial = [&](std::size_t n) {
        double acc = 0.0;
        for (std::size_t k = 1; k <= n; ++k) acc += std::pow(scale.eigenvalue(k), 2.0 * sigma);
        return acc;
    };
    const double d1 = partial(2048) - partial(1024);
    const double d2 = partial(65536) - partial(32768);
    CHECK(d2 < d1);
    CHECK(d2 < 0.05);
}

TEST_CASE("sample_noise rejects zero truncation") {
    Rng rng = make_stream(19);
    CHECK_THROWS_AS(sample_noise(ScaleSpec::power(1.0), 0, rng), std::invalid_argument);
}

}  // TEST_SUITE
