#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "postcon/grid.hpp"
#include "postcon/priors.hpp"
#include "postcon/rng.hpp"
#include "postcon/spectral.hpp"

namespace postcon {

/// Log-density of the posterior relative to the prior, up to an additive
/// constant.  Either representation may be unset depending on the model.
struct LogDensity {
    std::function<double(const SpectralField&)> spectral;
    std::function<double(const GridFunction&)> grid;
    std::string model;
    double n = 0.0;
};

/// -(n/2) ||a||_1^2 + n <a, y>_1 for the identity observation with noise
/// covariance scaled by 1/n; <.,.>_1 is the Cameron-Martin inner product of
/// the scale.
double log_density_small_noise(const SpectralField& a, const SpectralField& y, double n,
                               const ScaleSpec& scale);

/// -(n/2) ||a - truth||_1^2 + sqrt(n) <a - truth, xi>_1; same posterior as
/// log_density_small_noise up to an a-independent constant when
/// y = truth + xi/sqrt(n).
double log_density_small_noise_centered(const SpectralField& a, const SpectralField& truth,
                                        const SpectralField& xi, double n,
                                        const ScaleSpec& scale);

/// -sum_i (g(x_i) - y_i)^2 / (2 sigma^2); empty data gives 0.
double log_density_pointwise(const GridFunction& g, const std::vector<double>& xs,
                             const std::vector<double>& ys, double sigma);
double log_density_pointwise(const std::vector<double>& predictions,
                             const std::vector<double>& ys, double sigma);

/// Exact posterior for the conjugate diagonal pair: prior sd mu_j = j^-t,
/// noise sd lambda_j = j^-r scaled by 1/sqrt(n), identity observation.
struct ConjugatePosterior {
    std::vector<double> mean;
    std::vector<double> variance;

    std::size_t modes() const { return mean.size(); }
    SpectralField sample(Rng& rng) const;
};

ConjugatePosterior conjugate_posterior_diagonal(double t, double r, const SpectralField& y,
                                                double n);

struct PcnResult {
    std::vector<SpectralField> chain;         // post burn-in, thinned
    std::vector<double> chain_log_likelihood;  // aligned with chain
    std::vector<int> chain_accepted;
    double acceptance_rate = 0.0;  // post burn-in
    double beta = 0.0;             // step size actually used
    bool low_acceptance_warning = false;
};

struct PcnOptions {
    std::size_t n_steps = 20000;
    std::size_t burn_in = 2000;
    bool adapt_beta = true;  // double/halve toward 20-40% acceptance in burn-in
    std::size_t thin = 1;
};

/// Preconditioned Crank-Nicolson chain for a Gaussian(t) prior:
/// proposal a' = sqrt(1-beta^2) a + beta w with w a prior draw, accepted with
/// probability min(1, exp(loglik(a') - loglik(a))).
PcnResult pcn_sample(const std::function<double(const SpectralField&)>& log_likelihood,
                     const GaussianPrior& prior, double beta, const PcnOptions& opts, Rng& rng);

struct BallMassEstimate {
    double mass = 0.0;
    double stderr_ = 0.0;
    double ess = 0.0;
    enum class Method { Importance, Mcmc, ConjugateMc, Exact } method = Method::Importance;
    bool unreliable = false;
    std::string flag;
};

/// Self-normalized importance sampling with the prior as proposal (valid
/// because the posterior density is expressed relative to the prior).
/// Weights are max-stabilized; the standard error comes from the delta
/// method; ESS = (sum w)^2 / sum w^2.  ESS < 50 flags the estimate.
BallMassEstimate importance_ball_mass(const std::function<SpectralField(Rng&)>& draw_prior,
                                      const std::function<double(const SpectralField&)>& log_density,
                                      const std::function<double(const SpectralField&)>& distance,
                                      double radius, std::size_t n_samples, Rng& rng);

BallMassEstimate importance_ball_mass_grid(const std::function<GridFunction(Rng&)>& draw_prior,
                                           const std::function<double(const GridFunction&)>& log_density,
                                           const std::function<double(const GridFunction&)>& distance,
                                           double radius, std::size_t n_samples, Rng& rng);

/// Ball mass from a pCN chain; batch-means standard error.
BallMassEstimate pcn_ball_mass(const std::function<double(const SpectralField&)>& log_likelihood,
                               const GaussianPrior& prior,
                               const std::function<double(const SpectralField&)>& distance,
                               double radius, const PcnOptions& opts, Rng& rng);

void write_chain_csv(const std::string& path, const std::vector<SpectralField>& chain,
                     const std::vector<double>& log_density,
                     const std::vector<int>& accepted,
                     const std::vector<std::string>& comment_lines = {});

}  // namespace postcon
