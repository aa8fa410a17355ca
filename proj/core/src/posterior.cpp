#include "postcon/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace postcon {

double log_density_small_noise(const SpectralField& a, const SpectralField& y, double n,
                               const ScaleSpec& scale) {
    if (a.trunc() != y.trunc())
        throw std::invalid_argument("log_density_small_noise: truncation mismatch");
    const double nrm = norm_t(a, 1.0, scale);
    return -0.5 * n * nrm * nrm + n * inner_t(a, y, 1.0, scale);
}

double log_density_small_noise_centered(const SpectralField& a, const SpectralField& truth,
                                        const SpectralField& xi, double n,
                                        const ScaleSpec& scale) {
    SpectralField d = a;
    d -= truth;
    const double nrm = norm_t(d, 1.0, scale);
    return -0.5 * n * nrm * nrm + std::sqrt(n) * inner_t(d, xi, 1.0, scale);
}

double log_density_pointwise(const std::vector<double>& predictions,
                             const std::vector<double>& ys, double sigma) {
    if (predictions.size() != ys.size())
        throw std::invalid_argument("log_density_pointwise: data length mismatch");
    if (!(sigma > 0.0)) throw std::invalid_argument("log_density_pointwise: sigma must be > 0");
    double acc = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double r = predictions[i] - ys[i];
        acc += r * r;
    }
    return -acc / (2.0 * sigma * sigma);
}

double log_density_pointwise(const GridFunction& g, const std::vector<double>& xs,
                             const std::vector<double>& ys, double sigma) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("log_density_pointwise: design/data length mismatch");
    std::vector<double> pred(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) pred[i] = g.eval(xs[i]);
    return log_density_pointwise(pred, ys, sigma);
}

SpectralField ConjugatePosterior::sample(Rng& rng) const {
    SpectralField a = SpectralField::zeros(modes());
    for (std::size_t j = 0; j < modes(); ++j)
        a.coeffs[j] = mean[j] + std::sqrt(variance[j]) * standard_normal(rng);
    return a;
}

ConjugatePosterior conjugate_posterior_diagonal(double t, double r, const SpectralField& y,
                                                double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("conjugate_posterior_diagonal: n must be >= 1");
    ConjugatePosterior post;
    post.mean.resize(y.trunc());
    post.variance.resize(y.trunc());
    for (std::size_t j = 1; j <= y.trunc(); ++j) {
        const double mu2 = std::pow(static_cast<double>(j), -2.0 * t);
        const double lam2_over_n = std::pow(static_cast<double>(j), -2.0 * r) / n;
        const double denom = mu2 + lam2_over_n;
        post.mean[j - 1] = y.coeffs[j - 1] * mu2 / denom;
        post.variance[j - 1] = mu2 * lam2_over_n / denom;
    }
    return post;
}

PcnResult pcn_sample(const std::function<double(const SpectralField&)>& log_likelihood,
                     const GaussianPrior& prior, double beta, const PcnOptions& opts, Rng& rng) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("pcn_sample: beta must be in (0, 1]");
    double b = beta;
    SpectralField cur = prior.sample(rng);
    double cur_ll = log_likelihood(cur);

    std::size_t window_acc = 0, window_n = 0;
    auto step = [&](bool adapt) {
        SpectralField prop = prior.sample(rng);
        const double keep = std::sqrt(1.0 - b * b);
        for (std::size_t i = 0; i < prop.trunc(); ++i)
            prop.coeffs[i] = keep * cur.coeffs[i] + b * prop.coeffs[i];
        const double prop_ll = log_likelihood(prop);
        bool accept = false;
        const double log_alpha = prop_ll - cur_ll;
        if (log_alpha >= 0.0 || std::log(uniform01(rng)) < log_alpha) accept = true;
        if (accept) {
            cur = std::move(prop);
            cur_ll = prop_ll;
            ++window_acc;
        }
        ++window_n;
        if (adapt && window_n >= 200) {
            const double rate = static_cast<double>(window_acc) / static_cast<double>(window_n);
            if (rate < 0.20) b = std::max(1e-4, 0.5 * b);
            else if (rate > 0.40) b = std::min(1.0, 2.0 * b);
            window_acc = window_n = 0;
        }
        return accept;
    };

    for (std::size_t i = 0; i < opts.burn_in; ++i) step(opts.adapt_beta);

    PcnResult res;
    res.beta = b;
    std::size_t accepted = 0;
    window_acc = window_n = 0;
    res.chain.reserve(opts.n_steps / opts.thin + 1);
    for (std::size_t i = 0; i < opts.n_steps; ++i) {
        const bool acc = step(false);
        accepted += acc ? 1 : 0;
        if (i % opts.thin == 0) {
            res.chain.push_back(cur);
            res.chain_log_likelihood.push_back(cur_ll);
            res.chain_accepted.push_back(acc ? 1 : 0);
        }
    }
    res.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(opts.n_steps);
    res.low_acceptance_warning = res.acceptance_rate < 0.01;
    return res;
}

namespace {

template <typename Field>
BallMassEstimate importance_core(const std::function<Field(Rng&)>& draw_prior,
                                 const std::function<double(const Field&)>& log_density,
                                 const std::function<double(const Field&)>& distance,
                                 double radius, std::size_t n_samples, Rng& rng) {
    if (n_samples < 1000)
        throw std::invalid_argument("importance_ball_mass: need n_samples >= 1000");
    std::vector<double> logw(n_samples);
    std::vector<char> inside(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        Field a = draw_prior(rng);
        logw[i] = log_density(a);
        inside[i] = distance(a) <= radius ? 1 : 0;
    }
    const double mx = *std::max_element(logw.begin(), logw.end());
    double sw = 0.0, sw2 = 0.0, swb = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double w = std::exp(logw[i] - mx);
        sw += w;
        sw2 += w * w;
        swb += w * inside[i];
    }
    BallMassEstimate est;
    est.method = BallMassEstimate::Method::Importance;
    est.mass = swb / sw;
    double var_num = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double w = std::exp(logw[i] - mx);
        const double d = inside[i] - est.mass;
        var_num += w * w * d * d;
    }
    est.stderr_ = std::sqrt(var_num) / sw;
    est.ess = sw * sw / sw2;
    if (est.ess < 50.0) {
        est.unreliable = true;
        est.flag = "ESS < 50: unreliable; increase n or use MCMC";
    }
    return est;
}

}  // namespace

BallMassEstimate importance_ball_mass(const std::function<SpectralField(Rng&)>& draw_prior,
                                      const std::function<double(const SpectralField&)>& log_density,
                                      const std::function<double(const SpectralField&)>& distance,
                                      double radius, std::size_t n_samples, Rng& rng) {
    return importance_core<SpectralField>(draw_prior, log_density, distance, radius, n_samples, rng);
}

BallMassEstimate importance_ball_mass_grid(const std::function<GridFunction(Rng&)>& draw_prior,
                                           const std::function<double(const GridFunction&)>& log_density,
                                           const std::function<double(const GridFunction&)>& distance,
                                           double radius, std::size_t n_samples, Rng& rng) {
    return importance_core<GridFunction>(draw_prior, log_density, distance, radius, n_samples, rng);
}

BallMassEstimate pcn_ball_mass(const std::function<double(const SpectralField&)>& log_likelihood,
                               const GaussianPrior& prior,
                               const std::function<double(const SpectralField&)>& distance,
                               double radius, const PcnOptions& opts, Rng& rng) {
    PcnResult run = pcn_sample(log_likelihood, prior, 0.5, opts, rng);
    const std::size_t n = run.chain.size();
    std::vector<char> inside(n);
    for (std::size_t i = 0; i < n; ++i) inside[i] = distance(run.chain[i]) <= radius ? 1 : 0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += inside[i];
    mean /= static_cast<double>(n);
    // Batch means to absorb autocorrelation.
    const std::size_t n_batches = 32;
    const std::size_t bs = std::max<std::size_t>(1, n / n_batches);
    std::vector<double> bm;
    for (std::size_t b = 0; b + 1 <= n_batches && b * bs < n; ++b) {
        const std::size_t lo = b * bs;
        const std::size_t hi = std::min(n, lo + bs);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += inside[i];
        bm.push_back(acc / static_cast<double>(hi - lo));
    }
    double var = 0.0;
    for (double v : bm) var += (v - mean) * (v - mean);
    var /= std::max<std::size_t>(1, bm.size() - 1) * bm.size();
    BallMassEstimate est;
    est.method = BallMassEstimate::Method::Mcmc;
    est.mass = mean;
    est.stderr_ = std::sqrt(var);
    est.ess = static_cast<double>(bm.size());
    if (run.low_acceptance_warning) {
        est.unreliable = true;
        est.flag = "pCN acceptance below 1%";
    }
    return est;
}

void write_chain_csv(const std::string& path, const std::vector<SpectralField>& chain,
                     const std::vector<double>& log_density, const std::vector<int>& accepted,
                     const std::vector<std::string>& comment_lines) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_chain_csv: cannot open " + path);
    out.precision(17);
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    out << "step";
    if (!chain.empty())
        for (std::size_t k = 1; k <= chain.front().trunc(); ++k) out << ",coeff" << k;
    out << ",log_density,accepted\n";
    for (std::size_t i = 0; i < chain.size(); ++i) {
        out << i;
        for (double c : chain[i].coeffs) out << "," << c;
        out << "," << log_density[i] << "," << accepted[i] << "\n";
    }
}

}  // namespace postcon
