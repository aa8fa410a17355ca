#include "postcon/priors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "postcon/parallel.hpp"

namespace postcon {

SpectralField GaussianPrior::sample(Rng& rng) const {
    if (trunc == 0) throw std::invalid_argument("GaussianPrior: trunc must be >= 1");
    SpectralField a = SpectralField::zeros(trunc);
    for (std::size_t k = 1; k <= trunc; ++k) a.coeffs[k - 1] = coeff_sd(k) * standard_normal(rng);
    return a;
}

double GaussianPrior::coeff_sd(std::size_t k) const {
    return std::pow(static_cast<double>(k), -t);
}

UniformPrior::UniformPrior(std::vector<double> gammas, GridFunction a0, double beta,
                           double nu_star, bool require_positive)
    : gammas_(std::move(gammas)), a0_(std::move(a0)), beta_(beta), nu_star_(nu_star) {
    if (gammas_.empty()) throw std::invalid_argument("UniformPrior: empty gamma sequence");
    for (std::size_t i = 0; i < gammas_.size(); ++i) {
        if (!(gammas_[i] > 0.0)) throw std::invalid_argument("UniformPrior: gammas must be positive");
        if (i > 0 && gammas_[i] > gammas_[i - 1])
            throw std::invalid_argument("UniformPrior: gammas must be nonincreasing");
    }
    if (!(beta_ > 0.0 && beta_ <= 1.0))
        throw std::invalid_argument("UniformPrior: beta must be in (0, 1]");
    if (!(nu_star_ >= 0.0 && nu_star_ < 1.0))
        throw std::invalid_argument("UniformPrior: nu_star must be in [0, 1)");
    S_ = 0.0;
    for (double g : gammas_) S_ += g;
    if (require_positive && lower_bound() <= 0.0)
        throw std::invalid_argument("UniformPrior: a0 - sum(gamma) <= 0; positivity floor violated");

    const std::size_t m = a0_.intervals();
    psi_.reserve(gammas_.size());
    for (std::size_t i = 0; i < gammas_.size(); ++i) {
        GridFunction raw = GridFunction::from_callable(m, [i](double x) {
            return i == 0 ? 1.0 : std::cos(static_cast<double>(i) * std::numbers::pi * x);
        });
        const double c = holder_norm(raw, beta_);
        raw *= 1.0 / c;
        psi_.push_back(std::move(raw));
    }
}

double UniformPrior::s_nu(double nu) const {
    if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("UniformPrior::s_nu: nu in (0,1]");
    double s = 0.0;
    for (double g : gammas_) s += std::pow(g, nu);
    return std::pow(s, 1.0 / nu);
}

double UniformPrior::lower_bound() const {
    double mn = a0_[0];
    for (double v : a0_.values) mn = std::min(mn, v);
    return mn - S_;
}

GridFunction UniformPrior::assemble(const std::vector<double>& z) const {
    if (z.size() != gammas_.size())
        throw std::invalid_argument("UniformPrior::assemble: coefficient count mismatch");
    GridFunction a = a0_;
    for (std::size_t i = 0; i < gammas_.size(); ++i) {
        const double c = gammas_[i] * z[i];
        for (std::size_t j = 0; j < a.nodes(); ++j) a[j] += c * psi_[i][j];
    }
    return a;
}

std::vector<double> UniformPrior::sample_coeffs(Rng& rng) const {
    std::vector<double> z(gammas_.size());
    for (double& v : z) v = uniform_pm1(rng);
    return z;
}

GridFunction UniformPrior::sample(Rng& rng) const { return assemble(sample_coeffs(rng)); }

BallNorm BallNorm::hilbert(double t, ScaleSpec s) {
    BallNorm n;
    n.kind = Kind::HilbertT;
    n.index = t;
    n.scale = std::move(s);
    return n;
}

BallNorm BallNorm::sup() { return BallNorm{}; }

BallNorm BallNorm::holder(double alpha) {
    BallNorm n;
    n.kind = Kind::Holder;
    n.index = alpha;
    return n;
}

double uniform_small_ball_lower(const UniformPrior& prior, double nu, double eps,
                                const std::vector<double>& truth_coeffs) {
    if (!(nu > 0.0 && nu < 1.0))
        throw std::invalid_argument("uniform_small_ball_lower: nu must be in (0, 1)");
    if (!(nu > prior.nu_star()))
        throw std::invalid_argument("uniform_small_ball_lower: nu must exceed nu_star");
    if (!(eps > 0.0)) throw std::invalid_argument("uniform_small_ball_lower: eps must be > 0");
    for (double z : truth_coeffs)
        if (std::abs(z) > 1.0 + 1e-12)
            throw std::invalid_argument("uniform_small_ball_lower: truth outside [-1,1] box");
    const double S = prior.coeff_sum();
    if (eps >= 2.0 * S) return 0.0;  // ball covers the whole support
    const double nu_mid = 0.5 * (prior.nu_star() + nu);
    const double s_nu = prior.s_nu(nu_mid);
    const double exponent = 1.0 / (1.0 / nu_mid - 1.0);
    const double n_eps = std::ceil(std::pow(2.0 * s_nu / eps, exponent));
    return n_eps * std::log(eps / (2.0 * S));
}

double gaussian_small_ball_exponent(double t, double r) {
    if (!(t > r + 1.0))
        throw std::invalid_argument("gaussian_small_ball_exponent: requires t > r + 1");
    return 1.0 / (t - r - 1.0);
}

namespace {

double grid_ball_norm(const GridFunction& g, const BallNorm& norm) {
    switch (norm.kind) {
        case BallNorm::Kind::Sup:
            return sup_norm(g);
        case BallNorm::Kind::Holder:
            return holder_norm(g, norm.index);
        case BallNorm::Kind::HilbertT:
            throw std::invalid_argument("small_ball_mc: Hilbert-scale ball needs spectral fields");
    }
    return 0.0;
}

}  // namespace

std::vector<SmallBallEstimate> small_ball_mc_multi(const PriorSpec& prior,
                                                   const SpectralField* center_spec,
                                                   const GridFunction* center_grid,
                                                   const BallNorm& norm,
                                                   const std::vector<double>& eps_grid,
                                                   std::size_t n_samples, Rng& rng,
                                                   unsigned max_threads) {
    if (n_samples < 1000)
        throw std::invalid_argument("small_ball_mc: need n_samples >= 1000");
    if (eps_grid.empty()) throw std::invalid_argument("small_ball_mc: empty eps grid");

    const std::uint64_t master = rng();
    const unsigned workers = max_threads == 0 ? 4 : max_threads;
    const std::size_t per = (n_samples + workers - 1) / workers;
    std::vector<std::vector<std::size_t>> counts(workers,
                                                 std::vector<std::size_t>(eps_grid.size(), 0));
    std::vector<std::size_t> done(workers, 0);

    auto run_worker = [&](std::size_t w) {
        Rng local = make_stream(master, w);
        const std::size_t todo = std::min(per, n_samples - std::min(n_samples, w * per));
        for (std::size_t s = 0; s < todo; ++s) {
            double dist = 0.0;
            if (std::holds_alternative<GaussianPrior>(prior)) {
                const auto& gp = std::get<GaussianPrior>(prior);
                SpectralField a = gp.sample(local);
                if (center_spec) a -= *center_spec;
                if (norm.kind != BallNorm::Kind::HilbertT)
                    throw std::invalid_argument("small_ball_mc: spectral prior needs Hilbert ball");
                dist = norm_t(a, norm.index, *norm.scale);
            } else if (std::holds_alternative<UniformPrior>(prior)) {
                const auto& up = std::get<UniformPrior>(prior);
                GridFunction a = up.sample(local);
                if (center_grid) a -= *center_grid;
                dist = grid_ball_norm(a, norm);
            } else {
                const auto& ap = std::get<AtomPrior>(prior);
                SpectralField a = ap.point;
                if (center_spec) a -= *center_spec;
                if (norm.kind == BallNorm::Kind::HilbertT)
                    dist = norm_t(a, norm.index, *norm.scale);
                else {
                    double s2 = 0.0;
                    for (double v : a.coeffs) s2 += v * v;
                    dist = std::sqrt(s2);
                }
            }
            for (std::size_t e = 0; e < eps_grid.size(); ++e)
                if (dist <= eps_grid[e]) ++counts[w][e];
            ++done[w];
        }
    };
    parallel_for(workers, run_worker, workers);

    std::size_t total = 0;
    for (std::size_t w = 0; w < workers; ++w) total += done[w];
    std::vector<SmallBallEstimate> out(eps_grid.size());
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
        std::size_t hits = 0;
        for (std::size_t w = 0; w < workers; ++w) hits += counts[w][e];
        SmallBallEstimate est;
        est.n_samples = total;
        est.hits = hits;
        est.estimate = static_cast<double>(hits) / static_cast<double>(total);
        if (hits == 0) {
            est.stderr_ = 3.0 / static_cast<double>(total);  // rule-of-three upper bound
            est.flag = "zero hits; increase n_samples or eps";
        } else {
            est.stderr_ = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(total));
        }
        out[e] = est;
    }
    return out;
}

SmallBallEstimate small_ball_mc(const PriorSpec& prior, const SpectralField* center_spec,
                                const GridFunction* center_grid, const BallNorm& norm,
                                double eps, std::size_t n_samples, Rng& rng,
                                unsigned max_threads) {
    return small_ball_mc_multi(prior, center_spec, center_grid, norm, {eps}, n_samples, rng,
                               max_threads)[0];
}

}  // namespace postcon
