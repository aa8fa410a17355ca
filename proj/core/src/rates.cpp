#include "postcon/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace postcon {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBad = -1e300;
}  // namespace

std::array<double, 8> rate_constraint_slacks(double kappa, const RateWitness& w, double lambda,
                                             double rho, double e, bool corollary_form) {
    std::array<double, 8> s{};
    const double p = w.p, q = w.q, eta = w.eta, theta = w.theta;
    const double p_over_q = p / q;  // = p - 1
    const double A = (1.0 - lambda) * q;
    s[0] = (1.0 - 2.0 * kappa) - (0.5 + eta * p_over_q - kappa * lambda * p);
    s[1] = (1.0 - 2.0 * kappa) - (0.5 - eta + A * theta);
    s[2] = e * theta - rho * kappa;
    s[3] = (1.0 - 2.0 * kappa) - rho * kappa;
    s[4] = 2.0 - lambda * p;
    if (corollary_form) {
        s[5] = -kappa - (eta * p_over_q - 0.5) * lambda * p;
    } else {
        s[5] = s[4] > 0.0 ? -kappa - (eta * p_over_q - 0.5) / (2.0 - lambda * p) : kBad;
    }
    s[6] = e - A;
    s[7] = s[6] > 0.0
               ? std::max(1.0 - 2.0 * kappa, theta * e) - (0.5 - eta) * (1.0 + 1.0 / (e - A))
               : kBad;
    return s;
}

namespace {

double min_slack(const std::array<double, 8>& s) {
    double m = s[0];
    for (double v : s) m = std::min(m, v);
    return m;
}

struct Kernel {
    double rho, e, delta;
    bool corollary_form;

    // Feasibility at (kappa, lambda, p): eta and theta admit closed-form
    // interval reductions, so each p is O(1).
    bool try_p(double kappa, double lambda, double p, RateWitness* out) const {
        if (!(p > 1.0)) return false;
        const double q = p / (p - 1.0);
        if (2.0 - lambda * p <= delta) return false;
        const double A = (1.0 - lambda) * q;
        if (e - A <= delta) return false;
        const double x = 1.0 / (e - A);

        double eta_hi = (0.5 - kappa * (2.0 - lambda * p)) / (p - 1.0);
        if (corollary_form && lambda * p > 0.0)
            eta_hi = std::min(eta_hi, (0.5 - kappa / (lambda * p)) / (p - 1.0));
        eta_hi = std::min(eta_hi, 2.0);
        if (eta_hi <= delta) return false;

        const double theta_lo = rho * kappa / e;
        if (theta_lo >= 2.0) return false;
        const double eta_b = 2.0 * kappa - 0.5 + A * theta_lo;      // theta window opens
        const double eta_a = 0.5 - (1.0 - 2.0 * kappa) / (1.0 + x);  // (8) via 1-2kappa branch
        const double eta_c =
            (0.5 * A * (1.0 + x) - 0.5 * e + 2.0 * e * kappa) / (e + A * (1.0 + x));  // (8) via theta branch

        const double lo1 = std::max({eta_a, eta_b, 0.0});
        const double lo2 = std::max({eta_c, eta_b, 0.0});
        const double lo = std::min(lo1, lo2);
        if (lo >= eta_hi) return false;

        for (double frac : {0.5, 0.9, 0.99, 0.1}) {
            for (double lo_try : {lo1, lo2}) {
                if (lo_try >= eta_hi) continue;
                const double eta = lo_try + frac * (eta_hi - lo_try);
                const double theta_hi = (0.5 - 2.0 * kappa + eta) / A;
                if (theta_hi <= theta_lo) continue;
                const double theta8 = (0.5 - eta) * (1.0 + x) / e;
                double tlo = theta_lo;
                if (lo_try == lo2) tlo = std::max(tlo, theta8);
                if (tlo >= std::min(theta_hi, 2.0)) continue;
                const double theta = 0.5 * (tlo + std::min(theta_hi, 2.0));
                RateWitness w{p, q, eta, theta, kNaN};
                if (min_slack(rate_constraint_slacks(kappa, w, lambda, rho, e,
                                                     corollary_form)) > delta) {
                    if (out) *out = w;
                    return true;
                }
            }
        }
        return false;
    }

    bool feasible_lambda(double kappa, double lambda, RateWitness* out) const {
        // p on a log grid over [1+1e-3, 50].
        const int np = 200;
        for (int i = 0; i < np; ++i) {
            const double u = static_cast<double>(i) / (np - 1);
            const double p = 1.0 + 1e-3 * std::pow(49000.0, u);
            if (try_p(kappa, lambda, p, out)) return true;
        }
        return false;
    }
};

struct SRange {
    double lo = 0.0, hi = 0.0, sigma0 = 0.0;
    bool active = false;
    double lambda_of(double s) const { return (s - 1.0 - sigma0) / (s - 1.0); }

    std::vector<double> grid() const {
        std::vector<double> out;
        const int ns = 100;
        for (int i = 0; i < ns; ++i)
            out.push_back(lo + (i + 0.5) * (hi - lo) / ns);
        // The optimum typically sits at one end of the open interval; probe
        // geometrically close to both ends.
        for (int j = 2; j <= 7; ++j) {
            const double d = (hi - lo) * std::pow(10.0, -j);
            out.push_back(hi - d);
            out.push_back(lo + d);
        }
        return out;
    }
};

struct Oracle {
    Kernel kernel;
    SRange srange;
    double lambda_fixed = 0.0;
    std::vector<double> s_grid;

    bool operator()(double kappa, RateWitness* out) const {
        if (!srange.active) return kernel.feasible_lambda(kappa, lambda_fixed, out);
        for (double s : s_grid) {
            RateWitness w;
            if (kernel.feasible_lambda(kappa, srange.lambda_of(s), &w)) {
                w.s = s;
                if (out) *out = w;
                return true;
            }
        }
        return false;
    }

    double lambda_of_witness(const RateWitness& w) const {
        return srange.active ? srange.lambda_of(w.s) : lambda_fixed;
    }
};

// Coordinate ascent on the minimum slack, to hand back a witness that is
// comfortably interior where the geometry allows it.
void polish(const Oracle& oracle, double kappa, RateWitness* w) {
    auto score = [&](const RateWitness& cand) {
        return min_slack(rate_constraint_slacks(kappa, cand, oracle.lambda_of_witness(cand),
                                                oracle.kernel.rho, oracle.kernel.e,
                                                oracle.kernel.corollary_form));
    };
    double best = score(*w);
    for (int round = 0; round < 3; ++round) {
        // eta, theta, p, s each scanned over a shrinking bracket
        struct Coord {
            int id;
            double lo, hi;
        };
        std::vector<Coord> coords = {{0, 0.0, 2.0}, {1, 0.0, 2.0}, {2, 1.0 + 1e-3, 50.0}};
        if (oracle.srange.active) coords.push_back({3, oracle.srange.lo, oracle.srange.hi});
        for (const auto& c : coords) {
            double cur = c.id == 0 ? w->eta : c.id == 1 ? w->theta : c.id == 2 ? w->p : w->s;
            double radius = (c.hi - c.lo) / std::pow(8.0, round + 1);
            for (int k = -10; k <= 10; ++k) {
                double v = cur + radius * k / 10.0;
                if (v <= c.lo || v >= c.hi) continue;
                RateWitness cand = *w;
                if (c.id == 0) cand.eta = v;
                else if (c.id == 1) cand.theta = v;
                else if (c.id == 2) {
                    cand.p = v;
                    cand.q = v / (v - 1.0);
                } else cand.s = v;
                const double sc = score(cand);
                if (sc > best) {
                    best = sc;
                    *w = cand;
                }
            }
        }
    }
}

RateCertificate optimize(Oracle oracle, double rho, double e, const RateOptions& opts,
                         std::string problem) {
    if (oracle.srange.active) oracle.s_grid = oracle.srange.grid();
    RateCertificate cert;
    cert.rho = rho;
    cert.e = e;
    cert.corollary_form = opts.corollary_form;
    cert.problem = std::move(problem);

    double lo = 1e-4;
    RateWitness w_lo;
    if (!oracle(lo, &w_lo)) {
        cert.feasible = false;
        cert.kappa = 0.0;
        return cert;  // no positive rate certified
    }
    double hi = 1.0 / (2.0 + rho) - 2e-9;  // universal cap from constraint 4
    while (hi - lo > opts.bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        RateWitness w_mid;
        if (oracle(mid, &w_mid)) {
            lo = mid;
            w_lo = w_mid;
        } else {
            hi = mid;
        }
    }
    polish(oracle, lo, &w_lo);
    cert.feasible = true;
    cert.kappa = lo;
    cert.kappa_upper = hi;
    cert.witness = w_lo;
    cert.lambda = oracle.lambda_of_witness(w_lo);
    cert.slacks = rate_constraint_slacks(lo, w_lo, cert.lambda, rho, e, opts.corollary_form);
    return cert;
}

void check_rho_e(double rho, double e) {
    if (!(rho > 0.0)) throw std::invalid_argument("rate optimization: rho must be > 0");
    if (!(e > 0.0)) throw std::invalid_argument("rate optimization: e must be > 0");
}

}  // namespace

double rate_no_tail(double s, double sigma0, double rho) {
    if (!(s > 1.0 + sigma0))
        throw std::invalid_argument("rate_no_tail: requires s > 1 + sigma0");
    if (!(rho > 0.0)) throw std::invalid_argument("rate_no_tail: rho must be > 0");
    const double lambda = (s - 1.0 - sigma0) / (s - 1.0);
    return std::min(1.0 / (2.0 * (2.0 - lambda)), 1.0 / (2.0 + rho));
}

bool consistency_condition(double lambda, double e) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("consistency_condition: lambda must be in (0,1)");
    if (!(e > 0.0)) throw std::invalid_argument("consistency_condition: e must be > 0");
    if (lambda <= 0.5) return e > -1.0 + 2.0 * std::sqrt(2.0) * std::sqrt(1.0 - lambda);
    return e > 2.0 - 2.0 * lambda;
}

RateCertificate rate_general_optimize(double lambda, double rho, double e,
                                      const RateOptions& opts) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("rate_general_optimize: lambda must be in (0,1)");
    check_rho_e(rho, e);
    Oracle oracle;
    oracle.kernel = Kernel{rho, e, opts.strict_slack, opts.corollary_form};
    oracle.lambda_fixed = lambda;
    return optimize(std::move(oracle), rho, e, opts, "general(lambda)");
}

RateCertificate rate_general_optimize_s(double s_lo, double s_hi, double sigma0, double rho,
                                        double e, const RateOptions& opts) {
    if (!(s_lo > 1.0 + sigma0) || !(s_hi > s_lo))
        throw std::invalid_argument("rate_general_optimize_s: need 1 + sigma0 < s_lo < s_hi");
    check_rho_e(rho, e);
    Oracle oracle;
    oracle.kernel = Kernel{rho, e, opts.strict_slack, opts.corollary_form};
    oracle.srange = SRange{s_lo, s_hi, sigma0, true};
    return optimize(std::move(oracle), rho, e, opts, "general(s-range)");
}

RateCertificate rate_gaussian_case(double t, double r, const RateOptions& opts) {
    if (!(r > 0.0)) throw std::invalid_argument("rate_gaussian_case: r must be > 0");
    if (!(t > r + 1.0))
        throw std::invalid_argument("rate_gaussian_case: requires t > r + 1 (positive small-ball exponent)");
    const double sigma0 = 1.0 / (2.0 * r);
    const double s_lo = 1.0 + 1.0 / (2.0 * r);
    const double s_hi = (t - 0.5) / r;
    if (!(s_hi > s_lo)) throw std::invalid_argument("rate_gaussian_case: empty s interval");
    const double rho = 1.0 / (t - r - 1.0);
    RateCertificate cert = rate_general_optimize_s(s_lo, s_hi, sigma0, rho, 2.0, opts);
    cert.problem = "gaussian(t,r)";
    return cert;
}

double rate_opt_closed(double t, double r) {
    const double den = 2.0 * (t - r) - 1.0;
    if (!(den > 0.0)) throw std::invalid_argument("rate_opt_closed: requires t > r + 1/2");
    return (t - r - 0.5) / den;
}

std::pair<double, double> rate_large_data(double beta, double rho) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("rate_large_data: beta must be in (0,1]");
    if (!(rho > 0.0)) throw std::invalid_argument("rate_large_data: rho must be > 0");
    const double theorem =
        std::min(1.0 / (2.0 * (2.0 + 1.0 / beta)), 2.0 * beta / ((2.0 * beta + 1.0) * (2.0 + rho)));
    const double proof = std::min(1.0 / (3.0 * (1.0 + 1.0 / (2.0 * beta))),
                                  1.0 / ((1.0 + 1.0 / (2.0 * beta)) * (2.0 + rho)));
    return {theorem, proof};
}

double rate_elliptic(double alpha, double d, double r, double rho) {
    if (!(alpha > 1.0)) throw std::invalid_argument("rate_elliptic: requires alpha > 1");
    if (!(alpha > r + d / 2.0 - 2.0))
        throw std::invalid_argument("rate_elliptic: requires alpha > r + d/2 - 2");
    if (!(r > 0.0)) throw std::invalid_argument("rate_elliptic: requires r > 0");
    if (!(rho > 0.0)) throw std::invalid_argument("rate_elliptic: requires rho > 0");
    const double lift = std::min(alpha / (alpha + 2.0 + d / 2.0 - r), 1.0);
    const double reg = std::min(1.0 / (2.0 + rho), alpha / (2.0 * (alpha + 1.0 + d / (2.0 * r))));
    return lift * reg;
}

double rate_uniform_prior(double alpha, double nu, double d, double r) {
    if (!(nu > 0.0 && nu < 1.0))
        throw std::invalid_argument("rate_uniform_prior: nu must be in (0,1)");
    if (!(alpha > 1.0)) throw std::invalid_argument("rate_uniform_prior: requires alpha > 1");
    if (!(alpha > r + d / 2.0 - 2.0))
        throw std::invalid_argument("rate_uniform_prior: requires alpha > r + d/2 - 2");
    if (!(r > 0.0)) throw std::invalid_argument("rate_uniform_prior: requires r > 0");
    const double lift = std::min(alpha / (alpha + 2.0 + d / 2.0 - r), 1.0);
    const double reg = std::min((1.0 - nu) / (2.0 - nu),
                                (alpha - r + 2.0) / (2.0 * alpha + d - 2.0 * r + 4.0));
    return lift * reg;
}

std::vector<Figure1Row> figure1_table(double r, const std::vector<double>& ts,
                                      const RateOptions& opts) {
    std::vector<Figure1Row> rows;
    rows.reserve(ts.size());
    for (double t : ts) {
        if (!(t > r + 1.0))
            throw std::invalid_argument("figure1_table: every t must exceed r + 1");
        Figure1Row row;
        row.t = t;
        row.kappa_cor = rate_gaussian_case(t, r, opts).kappa;
        row.kappa_opt = rate_opt_closed(t, r);
        row.kappa_smallball = (t - r - 1.0) / (2.0 * (t - r) - 1.0);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace postcon
