#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace postcon {

/// Feasible point of the eight-inequality rate program.  q = p/(p-1); s is
/// NaN when the smoothness index was supplied as lambda directly.
struct RateWitness {
    double p = 2.0;
    double q = 2.0;
    double eta = 0.0;
    double theta = 0.0;
    double s = 0.0;
};

/// A certified contraction rate: kappa together with a strictly feasible
/// witness and the per-constraint slacks (RHS - LHS, all positive).
struct RateCertificate {
    double kappa = 0.0;        // certified (feasible) rate
    double kappa_upper = 0.0;  // bisection upper estimate of the supremum
    RateWitness witness;
    std::array<double, 8> slacks{};
    double lambda = 0.0;
    double rho = 0.0;
    double e = 0.0;
    bool corollary_form = false;
    bool feasible = false;  // false: no positive rate certified
    std::string problem;
};

struct RateOptions {
    /// Constraint 6 has two published variants; the default divides by
    /// (2 - lambda p), the alternate multiplies by lambda p.
    bool corollary_form = false;
    double strict_slack = 1e-9;
    double bisect_tol = 3e-8;
};

/// Slacks of the eight constraints at (kappa, witness); positive = satisfied.
std::array<double, 8> rate_constraint_slacks(double kappa, const RateWitness& w, double lambda,
                                             double rho, double e, bool corollary_form);

/// min{ 1/(2(2-lambda)), 1/(2+rho) } with lambda = (s-1-sigma0)/(s-1);
/// the explicit rate available when the prior is a.s. bounded in ||.||_s.
double rate_no_tail(double s, double sigma0, double rho);

/// Sufficient condition on the exponential-moment exponent e for posterior
/// consistency (no rate): e > -1 + 2 sqrt(2) sqrt(1-lambda) on (0, 1/2],
/// e > 2 - 2 lambda on (1/2, 1).
bool consistency_condition(double lambda, double e);

/// Maximizes kappa over the eight-inequality system at fixed lambda.
RateCertificate rate_general_optimize(double lambda, double rho, double e,
                                      const RateOptions& opts = {});

/// Same, additionally optimized over s in the open interval (s_lo, s_hi)
/// with lambda(s) = (s-1-sigma0)/(s-1).
RateCertificate rate_general_optimize_s(double s_lo, double s_hi, double sigma0, double rho,
                                        double e, const RateOptions& opts = {});

/// Gaussian conjugate pair (prior decay t, noise decay r): e = 2,
/// rho = 1/(t-r-1), sigma0 = 1/(2r), s in (1+1/(2r), (t-1/2)/r).
/// The optimum matches (t-r-1)/(2(t-r)-1).
RateCertificate rate_gaussian_case(double t, double r, const RateOptions& opts = {});

/// Benchmark rate for the same pair: (t-r-1/2)/(2(t-r)-1).
double rate_opt_closed(double t, double r);

/// Pointwise-observation rate; returns {theorem bound, proof bound} whose
/// first branches differ in the published statements (both reported).
std::pair<double, double> rate_large_data(double beta, double rho);

/// (alpha/(alpha+2+d/2-r) ^ 1) * (1/(2+rho) ^ alpha/(2(alpha+1+d/(2r)))).
double rate_elliptic(double alpha, double d, double r, double rho);

/// Uniform-series-prior elliptic rate:
/// (alpha/(alpha+2+d/2-r) ^ 1) * ((1-nu)/(2-nu) ^ (alpha-r+2)/(2alpha+d-2r+4)).
double rate_uniform_prior(double alpha, double nu, double d, double r);

struct Figure1Row {
    double t = 0.0;
    double kappa_cor = 0.0;
    double kappa_opt = 0.0;
    double kappa_smallball = 0.0;
};

/// Per t: the optimized rate, the benchmark rate and the small-ball cap
/// (t-r-1)/(2(t-r)-1).  Contract: kappa_cor <= kappa_smallball + 1e-3 <= kappa_opt.
std::vector<Figure1Row> figure1_table(double r, const std::vector<double>& ts,
                                      const RateOptions& opts = {});

}  // namespace postcon
