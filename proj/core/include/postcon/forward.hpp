#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "postcon/grid.hpp"
#include "postcon/priors.hpp"
#include "postcon/rng.hpp"
#include "postcon/spectral.hpp"

namespace postcon {

/// Solves -(a p')' = f on (0,1) with p(0) = p(1) = 0 by conservative finite
/// differences with harmonic-mean face coefficients (second order).
/// Requires a > 0 at every node and matching meshes.
GridFunction solve_elliptic_1d(const GridFunction& a, const GridFunction& f);

struct RecoveryReport {
    double x_star = 0.0;          // zero of the flux a p'
    double p_second_at_star = 0;  // fitted p'' there
    bool conditioning_warning = false;
    bool guard_violated = false;  // some recovered node fell below a_min_guard
    double min_recovered = 0.0;
};

/// Inverts the 1D elliptic relation: given p (a Dirichlet solution with one
/// interior flux zero) and source f > 0, returns the coefficient via
/// a(x) = (int_x^{x*} f) / p'(x), with the removable singularity at the flux
/// zero filled from a local parabolic fit (a(x*) = f(x*) / (-p''(x*))).
/// a_min_guard is a diagnostic floor: violations are flagged, not projected.
GridFunction recover_coefficient_1d(const GridFunction& p, const GridFunction& f,
                                    double a_min_guard = 0.0, RecoveryReport* report = nullptr);

/// ||p1 - p2||_{C^2,discrete} / ||a1 - a2||_{C^alpha,discrete}; 0 when both
/// coefficients coincide.
double forward_stability_ratio(const GridFunction& a1, const GridFunction& a2,
                               const GridFunction& f, double alpha);

/// ||a1 - a2||_sup / (||a1||_{C^1,discrete} ||p1 - p2||_{C^2,discrete}).
double inverse_stability_ratio(const GridFunction& a1, const GridFunction& a2,
                               const GridFunction& f);

/// Empirical stability constants over a corpus of prior draws.
struct StabilitySweep {
    std::size_t pairs = 0;
    double max_forward_ratio = 0.0;
    double max_inverse_ratio = 0.0;
    /// max ||a1-a2||_sup / ||p1-p2||_{C^2}; the constant used by the
    /// pressure-ball reduction (C^1 factor absorbed).
    double reduction_constant = 0.0;
};

StabilitySweep stability_sweep(const UniformPrior& prior, const GridFunction& f,
                               std::size_t n_pairs, double alpha, Rng& rng);

/// y = p + n^{-1/2} xi observed through the scale's eigenbasis.  In d = 1
/// the basis is sqrt(2) sin(k pi x); grid functions are projected by
/// trapezoid quadrature before the noise is added.
struct SmallNoiseModel {
    double n = 1.0;
    ScaleSpec scale = ScaleSpec::power(1.0);
    std::size_t trunc = 256;
};

/// y_i = p(x_i) + sigma zeta_i at fixed design points inside (0,1).
struct PointwiseModel {
    std::vector<double> design;
    double sigma = 1.0;
};

using ObservationModel = std::variant<SmallNoiseModel, PointwiseModel>;

struct DataRecord {
    SpectralField spectral;        // small-noise observations
    std::vector<double> pointwise;  // pointwise observations
};

/// Project a grid function on the first `trunc` Dirichlet sine modes.
SpectralField project_sine_basis(const GridFunction& g, std::size_t trunc);
GridFunction synth_sine_basis(const SpectralField& c, std::size_t m);

DataRecord observe(const GridFunction& p, const ObservationModel& model, Rng& rng);
DataRecord observe(const SpectralField& p, const SmallNoiseModel& model, Rng& rng);

std::vector<double> equidistant_design(std::size_t n);

struct DesignReport {
    bool pass = false;
    std::string mode;
    double worst_gap = 0.0;        // choi: largest empty interval; empirical: worst deficit
    double threshold = 0.0;
    std::string worst_description;
};

enum class DesignMode { Choi, Empirical };

/// Checks observation designs: Choi mode verifies every interval of length
/// 1/(K n) contains a point; empirical mode verifies F_n(b) - F_n(a) >=
/// K (b - a) over a dyadic grid of pairs.
DesignReport design_check(const std::vector<double>& points, double K, DesignMode mode);

}  // namespace postcon
