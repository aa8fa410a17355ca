#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "postcon/forward.hpp"
#include "postcon/posterior.hpp"
#include "postcon/priors.hpp"
#include "postcon/rng.hpp"
#include "postcon/spectral.hpp"

namespace postcon {

struct ContractionRow {
    double n = 0.0;
    double radius = 0.0;  // fixed eps (mass rows) or fitted quantile radius
    BallMassEstimate mass;
    std::uint64_t seed = 0;
};

struct ContractionCurve {
    std::vector<ContractionRow> rows;
    std::string kind;
    std::string norm_desc;
    double level = 0.0;  // quantile level for radius curves, 0 for mass curves
};

/// Smallest radius with estimated posterior mass >= level, found by 12
/// bisection steps on [0, radius_hi] (early exit within +-0.02 of level).
double radius_for_level(const std::function<double(double)>& mass_at, double level,
                        double radius_hi);

struct RateFit {
    double kappa_hat = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of log-radius residuals
    double n_min = 0.0, n_max = 0.0;
    std::size_t points = 0;
};

/// kappa_hat = -slope of log(radius) against log(n) over the curve's rows.
/// Requires at least 4 distinct usable n values.
RateFit fit_rate(const ContractionCurve& curve, double level);

/// Small-noise conjugate experiment: prior Gaussian(t), noise decay r,
/// identity observation, data y = truth + xi/sqrt(n).  Ball masses and
/// quantile radii come from exact conjugate-posterior sampling.
struct ConjugateExperiment {
    double t = 3.0;
    double r = 1.0;
    std::size_t trunc = 256;
    std::vector<double> n_grid{10, 100, 1000, 10000};
    double eps = 0.5;          // fixed ball radius, Cameron-Martin norm
    double norm_index = 1.0;   // ||.||_t index used for the ball
    double level = 0.9;
    std::size_t n_draws = 2000;
    std::uint64_t seed = 1;
};

struct ConjugateCurves {
    ContractionCurve mass_curve;    // mass at fixed eps per n
    ContractionCurve radius_curve;  // level-quantile radius per n
    SpectralField truth;
};

ConjugateCurves run_contraction_conjugate(const ConjugateExperiment& ex);

/// Degenerate end-member: the prior is a point mass at the truth, so every
/// posterior ball around the truth carries mass 1.
ContractionCurve run_contraction_atom(const std::vector<double>& n_grid, double eps);

/// Pointwise regression of the function itself (no PDE): uniform prior,
/// equidistant design, sup-norm balls around the truth, importance sampling
/// with the prior as proposal.
struct LargeDataExperiment {
    UniformPrior prior;
    std::vector<double> n_grid{32, 128, 512, 2048};
    double sigma = 0.5;
    double eps = 0.2;
    std::size_t n_samples = 4000;
    std::uint64_t seed = 1;
};

struct GridExperimentResult {
    ContractionCurve mass_curve;
    GridFunction truth;
};

GridExperimentResult run_contraction_large_data(const LargeDataExperiment& ex);

/// Elliptic inverse problem: coefficient from the uniform prior, pressure
/// observed pointwise, sup-norm coefficient balls around the truth.  Ball
/// masses are computed directly in coefficient space via the pointwise
/// likelihood of the solved pressure; importance sampling with pCN fallback
/// is flagged per-row, never silent.
struct EllipticExperiment {
    UniformPrior prior;
    std::vector<double> n_grid{32, 128, 512};
    double sigma = 0.05;
    double eps = 0.1;
    std::size_t n_samples = 2000;
    std::uint64_t seed = 1;
};

GridExperimentResult run_contraction_elliptic(const EllipticExperiment& ex);

/// Empirical form of the stability reduction: the posterior mass of the
/// coefficient sup-ball must dominate the mass of the pressure C^2-ball of
/// radius eps / M (M from a stability sweep).
struct ReductionCheckConfig {
    double eps = 0.1;
    double sigma = 0.05;
    std::size_t n_obs = 1000;
    std::size_t n_samples = 2000;
    std::uint64_t seed = 1;
};

struct ReductionCheckResult {
    BallMassEstimate lhs;  // coefficient ball
    BallMassEstimate rhs;  // pressure ball at eps / mhat
    double mhat = 0.0;
    double eps = 0.0;
    /// lhs - rhs + 3 * combined SE; the reduction holds when positive.
    double slack() const;
};

ReductionCheckResult pushforward_reduction_check(const UniformPrior& prior,
                                                 const GridFunction& truth,
                                                 const GridFunction& f,
                                                 const StabilitySweep& sweep,
                                                 const ReductionCheckConfig& cfg);

/// Two-atom-family counterexample: log ratio of the posterior mass of the
/// inconsistent branch to its complement, evaluated in the log domain over
/// k <= k_max.  rng == nullptr uses zero noise.  Requires
/// k_max >= ceil(sqrt(n)) + 10.
double inconsistency_ratio(double n, double theta, std::size_t k_max, Rng* rng);

struct NormLift {
    double kappa = 0.0;   // predicted rate in ||.||_r
    double lambda = 0.0;  // interpolation split (s - r)/(s - 1)
};

/// Lifts a fitted Cameron-Martin rate to a stronger norm index r in [1, s]
/// through the interpolation inequality: rate -> rate * (s - r)/(s - 1).
NormLift stronger_norm_lift(double kappa_cm, double s, double r);

void write_curve_csv(const std::string& path, const ContractionCurve& curve,
                     const std::vector<std::string>& comment_lines = {});

}  // namespace postcon
