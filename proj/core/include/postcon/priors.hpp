#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "postcon/grid.hpp"
#include "postcon/rng.hpp"
#include "postcon/spectral.hpp"

namespace postcon {

/// Gaussian series prior: coefficient k is N(0, k^{-2t}) against the scale's
/// eigenbasis.
struct GaussianPrior {
    double t = 2.0;
    std::size_t trunc = 256;

    SpectralField sample(Rng& rng) const;
    double coeff_sd(std::size_t k) const;  // k^{-t}, 1-based
};

/// Uniform series prior a = a0 + sum_i gamma_i z_i psi_i with z_i i.i.d.
/// U[-1,1].  The psi_i are cosines rescaled so that the discrete C^beta norm
/// of each basis function is exactly 1 on the working grid; consequently
/// every sample satisfies ||a - a0||_sup <= sum_i gamma_i.
class UniformPrior {
  public:
    /// gammas must be positive and nonincreasing.  nu_star is the known
    /// summability threshold of the coefficient law (0 for generic finite
    /// lists).  With require_positive, construction rejects specs that
    /// cannot guarantee a positive lower bound min(a0) - sum gamma_i > 0.
    UniformPrior(std::vector<double> gammas, GridFunction a0, double beta = 1.0,
                 double nu_star = 0.0, bool require_positive = true);

    const std::vector<double>& gammas() const { return gammas_; }
    const GridFunction& mean() const { return a0_; }
    const std::vector<GridFunction>& basis() const { return psi_; }
    double beta() const { return beta_; }
    double nu_star() const { return nu_star_; }
    double coeff_sum() const { return S_; }                     // sum gamma_i
    double s_nu(double nu) const;                               // (sum gamma_i^nu)^(1/nu)
    double lower_bound() const;                                 // min(a0) - S
    std::size_t terms() const { return gammas_.size(); }
    std::size_t mesh() const { return a0_.intervals(); }

    GridFunction sample(Rng& rng) const;
    GridFunction assemble(const std::vector<double>& z) const;  // a0 + sum gamma z psi
    std::vector<double> sample_coeffs(Rng& rng) const;

  private:
    std::vector<double> gammas_;
    GridFunction a0_;
    double beta_;
    double nu_star_;
    double S_;
    std::vector<GridFunction> psi_;
};

/// Degenerate prior: a single atom.  Useful as an end-member in experiments.
struct AtomPrior {
    SpectralField point;
};

using PriorSpec = std::variant<GaussianPrior, UniformPrior, AtomPrior>;

/// Ball shape used by Monte Carlo small-ball estimators.
struct BallNorm {
    enum class Kind { HilbertT, Sup, Holder };
    Kind kind = Kind::Sup;
    double index = 0.0;               // t for HilbertT, alpha for Holder
    std::optional<ScaleSpec> scale;   // required for HilbertT

    static BallNorm hilbert(double t, ScaleSpec s);
    static BallNorm sup();
    static BallNorm holder(double alpha);
};

struct SmallBallEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;   // binomial; for zero hits, the rule-of-three bound
    std::size_t n_samples = 0;
    std::size_t hits = 0;
    std::string flag;       // nonempty when the estimate is unreliable
};

/// log mu0(B_eps(truth)) >= N_eps log(eps / (2 S)), the coefficientwise
/// boxing bound for the uniform prior; N_eps = ceil((2 S_nu~ / eps)^{1/(1/nu~-1)})
/// with nu~ the midpoint of (nu_star, nu).  Returns 0 when the ball covers
/// the whole support (eps >= 2S).
double uniform_small_ball_lower(const UniformPrior& prior, double nu, double eps,
                                const std::vector<double>& truth_coeffs);

/// Small-ball exponent of the Gaussian(t) prior measured in the Cameron-
/// Martin norm of a noise scale with decay r: rho = 1/(t - r - 1), so that
/// log mu0(B_eps) >= -c eps^{-rho}.  Requires t > r + 1.
double gaussian_small_ball_exponent(double t, double r);

/// Monte Carlo estimate of mu0(B_eps(center)); one sweep serves a whole
/// radius grid so the returned estimates are exactly monotone in eps.
std::vector<SmallBallEstimate> small_ball_mc_multi(const PriorSpec& prior,
                                                   const SpectralField* center_spec,
                                                   const GridFunction* center_grid,
                                                   const BallNorm& norm,
                                                   const std::vector<double>& eps_grid,
                                                   std::size_t n_samples, Rng& rng,
                                                   unsigned max_threads = 0);

SmallBallEstimate small_ball_mc(const PriorSpec& prior, const SpectralField* center_spec,
                                const GridFunction* center_grid, const BallNorm& norm,
                                double eps, std::size_t n_samples, Rng& rng,
                                unsigned max_threads = 0);

}  // namespace postcon
