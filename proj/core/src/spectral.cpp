#include "postcon/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace postcon {

ScaleSpec ScaleSpec::power(double r, std::size_t trunc_default) {
    if (!(r > 0.0)) throw std::invalid_argument("ScaleSpec::power: r must be > 0");
    ScaleSpec s;
    s.law_ = Law::Power;
    s.r_ = r;
    s.trunc_default_ = trunc_default;
    return s;
}

ScaleSpec ScaleSpec::dirichlet_laplacian(double r, int d, std::size_t trunc_default) {
    if (!(r > 0.0)) throw std::invalid_argument("ScaleSpec::dirichlet_laplacian: r must be > 0");
    if (d < 1) throw std::invalid_argument("ScaleSpec::dirichlet_laplacian: d must be >= 1");
    ScaleSpec s;
    s.law_ = Law::DirichletLaplacian;
    s.r_ = r;
    s.d_ = d;
    s.trunc_default_ = trunc_default;
    return s;
}

ScaleSpec ScaleSpec::explicit_list(std::vector<double> lambdas, std::size_t trunc_default) {
    if (lambdas.empty()) throw std::invalid_argument("ScaleSpec::explicit_list: empty list");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i]))
            throw std::invalid_argument("ScaleSpec::explicit_list: eigenvalues must be positive");
        if (i > 0 && lambdas[i] > lambdas[i - 1])
            throw std::invalid_argument("ScaleSpec::explicit_list: eigenvalues must be nonincreasing");
    }
    ScaleSpec s;
    s.law_ = Law::Explicit;
    s.trunc_default_ = trunc_default == 0 ? lambdas.size() : trunc_default;
    s.explicit_ = std::move(lambdas);
    if (s.trunc_default_ > s.explicit_.size())
        throw std::invalid_argument("ScaleSpec::explicit_list: trunc_default exceeds list length");
    return s;
}

std::size_t ScaleSpec::max_modes() const {
    return law_ == Law::Explicit ? explicit_.size() : std::numeric_limits<std::size_t>::max();
}

double ScaleSpec::eigenvalue(std::size_t k) const {
    if (k == 0) throw std::invalid_argument("ScaleSpec::eigenvalue: k is 1-based");
    switch (law_) {
        case Law::Power:
            return std::pow(static_cast<double>(k), -r_);
        case Law::DirichletLaplacian:
            if (d_ == 1) return std::pow(std::numbers::pi * static_cast<double>(k), -r_);
            return std::pow(static_cast<double>(k), -r_ / static_cast<double>(d_));
        case Law::Explicit:
            if (k > explicit_.size())
                throw std::out_of_range("ScaleSpec::eigenvalue: beyond explicit list");
            return explicit_[k - 1];
    }
    return 0.0;  // unreachable
}

std::vector<double> ScaleSpec::eigenvalues(std::size_t n) const {
    std::vector<double> out(n);
    for (std::size_t k = 1; k <= n; ++k) out[k - 1] = eigenvalue(k);
    return out;
}

double ScaleSpec::sigma0() const { return trace_sigma0(*this); }

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    if (coeffs.size() != other.coeffs.size())
        throw std::invalid_argument("SpectralField: truncation mismatch");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += other.coeffs[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    if (coeffs.size() != other.coeffs.size())
        throw std::invalid_argument("SpectralField: truncation mismatch");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= other.coeffs[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double c) {
    for (double& v : coeffs) v *= c;
    return *this;
}

namespace {

void check_field(const SpectralField& x, const ScaleSpec& scale, const char* where) {
    if (x.trunc() > scale.max_modes())
        throw std::invalid_argument(std::string(where) + ": truncation exceeds available eigenvalues");
    for (double v : x.coeffs)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(where) + ": non-finite coefficient");
}

}  // namespace

double norm_t(const SpectralField& x, double t, const ScaleSpec& scale) {
    check_field(x, scale, "norm_t");
    double sum = 0.0;
    for (std::size_t k = 1; k <= x.trunc(); ++k) {
        const double w = std::pow(scale.eigenvalue(k), -2.0 * t);
        sum += w * x.coeffs[k - 1] * x.coeffs[k - 1];
    }
    return std::sqrt(sum);
}

double inner_t(const SpectralField& x, const SpectralField& y, double t, const ScaleSpec& scale) {
    if (x.trunc() != y.trunc())
        throw std::invalid_argument("inner_t: truncation mismatch");
    check_field(x, scale, "inner_t");
    check_field(y, scale, "inner_t");
    double sum = 0.0;
    for (std::size_t k = 1; k <= x.trunc(); ++k) {
        const double w = std::pow(scale.eigenvalue(k), -2.0 * t);
        sum += w * x.coeffs[k - 1] * y.coeffs[k - 1];
    }
    return sum;
}

double interpolation_gap(const SpectralField& x, double q, double r, double s,
                         const ScaleSpec& scale) {
    if (!(q < r && r < s))
        throw std::invalid_argument("interpolation_gap: need q < r < s");
    const double nq = norm_t(x, q, scale);
    const double nr = norm_t(x, r, scale);
    const double ns = norm_t(x, s, scale);
    if (nq == 0.0 || ns == 0.0) return 0.0;  // zero field
    const double a = (s - r) / (s - q);
    const double b = (r - q) / (s - q);
    return std::pow(nq, a) * std::pow(ns, b) - nr;
}

namespace {

// Least squares fit y = a + b x; returns (b, R^2).
std::pair<double, double> fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double vxx = sxx - sx * sx / n;
    const double vxy = sxy - sx * sy / n;
    const double vyy = syy - sy * sy / n;
    if (vxx <= 0.0) return {0.0, 0.0};
    const double slope = vxy / vxx;
    const double r2 = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
    return {slope, r2};
}

double explicit_sigma0(const std::vector<double>& lambdas) {
    const std::size_t n = lambdas.size();
    if (n < 16)
        throw std::invalid_argument(
            "trace_sigma0: explicit list too short to extrapolate (need >= 16 eigenvalues)");
    // Tail = last half, split into two quarters to probe for slope steepening.
    const std::size_t lo = n / 2;
    std::vector<double> x1, y1, x2, y2, xa, ya;
    for (std::size_t k = lo; k < n; ++k) {
        const double lx = std::log(static_cast<double>(k + 1));
        const double ly = std::log(lambdas[k]);
        xa.push_back(lx);
        ya.push_back(ly);
        if (k < lo + (n - lo) / 2) {
            x1.push_back(lx);
            y1.push_back(ly);
        } else {
            x2.push_back(lx);
            y2.push_back(ly);
        }
    }
    const auto [b1, r21] = fit_slope(x1, y1);
    const auto [b2, r22] = fit_slope(x2, y2);
    (void)r21;
    (void)r22;
    // Super-algebraic decay: the local log-log slope keeps steepening, so the
    // series sum lambda_k^{2 sigma} converges for every sigma > 0.
    if (b2 < 1.25 * b1 && b1 < 0.0) return 0.0;
    const auto [slope, r2] = fit_slope(xa, ya);
    if (r2 < 0.99)
        throw std::invalid_argument(
            "trace_sigma0: tail of explicit list does not follow a power law (R^2 < 0.99)");
    if (slope >= 0.0)
        throw std::invalid_argument("trace_sigma0: eigenvalues do not decay; no finite sigma0");
    return std::max(0.0, -1.0 / (2.0 * slope));
}

}  // namespace

double trace_sigma0(const ScaleSpec& scale, double /*tol*/) {
    switch (scale.law()) {
        case ScaleSpec::Law::Power:
            return 1.0 / (2.0 * scale.r());
        case ScaleSpec::Law::DirichletLaplacian:
            return static_cast<double>(scale.dim()) / (2.0 * scale.r());
        case ScaleSpec::Law::Explicit:
            return explicit_sigma0(scale.explicit_values());
    }
    return 0.0;  // unreachable
}

SpectralField sample_noise(const ScaleSpec& scale, std::size_t trunc, Rng& rng) {
    if (trunc == 0) throw std::invalid_argument("sample_noise: trunc must be >= 1");
    if (trunc > scale.max_modes())
        throw std::invalid_argument("sample_noise: truncation exceeds available eigenvalues");
    SpectralField xi = SpectralField::zeros(trunc);
    for (std::size_t k = 1; k <= trunc; ++k)
        xi.coeffs[k - 1] = scale.eigenvalue(k) * standard_normal(rng);
    return xi;
}

}  // namespace postcon
