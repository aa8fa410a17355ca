#include "postcon/forward.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "postcon/parallel.hpp"

namespace postcon {

namespace {

double harmonic_mean(double a, double b) { return 2.0 * a * b / (a + b); }

// Thomas algorithm for the tridiagonal system; diagonally dominant here.
std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

}  // namespace

GridFunction solve_elliptic_1d(const GridFunction& a, const GridFunction& f) {
    if (a.nodes() != f.nodes())
        throw std::invalid_argument("solve_elliptic_1d: coefficient/source mesh mismatch");
    for (double v : a.values)
        if (!(v > 0.0)) throw std::invalid_argument("solve_elliptic_1d: coefficient must be > 0");
    const std::size_t m = a.intervals();
    const double h = a.h();
    const std::size_t n = m - 1;  // interior unknowns
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double am = harmonic_mean(a[i - 1], a[i]);      // face i-1/2
        const double ap = harmonic_mean(a[i], a[i + 1]);      // face i+1/2
        lower[i - 1] = -am;
        diag[i - 1] = am + ap;
        upper[i - 1] = -ap;
        rhs[i - 1] = f[i] * h * h;
    }
    std::vector<double> interior = solve_tridiagonal(std::move(lower), std::move(diag),
                                                     std::move(upper), std::move(rhs));
    GridFunction p(m, 0.0);
    for (std::size_t i = 1; i <= n; ++i) p[i] = interior[i - 1];
    return p;
}

namespace {

// Least-squares parabola through (xs, ys); returns coefficients of
// c0 + c1 (x - xc) + c2 (x - xc)^2.
std::array<double, 3> fit_parabola(const std::vector<double>& xs, const std::vector<double>& ys,
                                   double xc) {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double u = xs[i] - xc;
        const double u2 = u * u;
        s0 += 1;
        s1 += u;
        s2 += u2;
        s3 += u2 * u;
        s4 += u2 * u2;
        b0 += ys[i];
        b1 += ys[i] * u;
        b2 += ys[i] * u2;
    }
    // Solve the 3x3 normal equations by Cramer's rule.
    const double d = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s3 * s2) + s2 * (s1 * s3 - s2 * s2);
    const double c0 = (b0 * (s2 * s4 - s3 * s3) - s1 * (b1 * s4 - s3 * b2) + s2 * (b1 * s3 - s2 * b2)) / d;
    const double c1 = (s0 * (b1 * s4 - b2 * s3) - b0 * (s1 * s4 - s3 * s2) + s2 * (s1 * b2 - b1 * s2)) / d;
    const double c2 = (s0 * (s2 * b2 - s3 * b1) - s1 * (s1 * b2 - s3 * b0) + b0 * (s1 * s3 - s2 * s2)) / d;
    return {c0, c1, c2};
}

}  // namespace

GridFunction recover_coefficient_1d(const GridFunction& p, const GridFunction& f,
                                    double a_min_guard, RecoveryReport* report) {
    if (p.nodes() != f.nodes())
        throw std::invalid_argument("recover_coefficient_1d: mesh mismatch");
    for (double v : f.values)
        if (!(v > 0.0)) throw std::invalid_argument("recover_coefficient_1d: source must be > 0");
    const std::size_t m = p.intervals();
    const double h = p.h();

    // The flux a p' has the sign of p'; locate its unique interior zero by
    // the sign change of the face differences.
    double dmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) dmax = std::max(dmax, std::abs(p[i + 1] - p[i]));
    if (dmax == 0.0) throw std::runtime_error("recover_coefficient_1d: degenerate pressure (flat)");
    const double dtol = 1e-13 * dmax;
    int sign_changes = 0;
    std::size_t change_face = 0;
    int prev = 0, first = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = p[i + 1] - p[i];
        if (std::abs(d) <= dtol) continue;
        const int s = d > 0.0 ? 1 : -1;
        if (first == 0) first = s;
        if (prev != 0 && s != prev) {
            ++sign_changes;
            change_face = i;
        }
        prev = s;
    }
    if (sign_changes != 1 || first != 1 || prev != -1)
        throw std::runtime_error("recover_coefficient_1d: degenerate pressure (" +
                                 std::to_string(sign_changes) + " flux sign changes)");

    // Parabolic fit of p over 5 nodes around the sign change: vertex -> x*,
    // curvature -> p''(x*).
    const std::size_t center = std::min(std::max<std::size_t>(change_face, 2), m - 2);
    std::vector<double> xs, ys;
    for (std::size_t i = center - 2; i <= center + 2; ++i) {
        xs.push_back(p.x(i));
        ys.push_back(p[i]);
    }
    const auto coef = fit_parabola(xs, ys, p.x(center));
    if (coef[2] >= 0.0)
        throw std::runtime_error("recover_coefficient_1d: no interior maximum at the flux zero");
    const double x_star = p.x(center) - coef[1] / (2.0 * coef[2]);
    const double p_second = 2.0 * coef[2];

    // G(x) = int_x^{x*} f by trapezoid antiderivative.
    const GridFunction Phi = cumulative_integral(f);
    const double f_star = f.eval(x_star);
    const double phi_star = Phi.eval(x_star);

    const GridFunction dp = derivative(p);
    GridFunction a(m, 0.0);
    const double window = 3.0 * h;
    bool conditioning = false;
    std::vector<std::size_t> filled;
    for (std::size_t i = 0; i <= m; ++i) {
        const double xi = p.x(i);
        if (std::abs(xi - x_star) <= window) {
            filled.push_back(i);
            continue;
        }
        if (std::abs(dp[i]) < 1e-12) conditioning = true;
        a[i] = (phi_star - Phi[i]) / dp[i];
    }
    // Fill the window by quadratic interpolation through the nearest
    // recovered nodes on each side and the removable-singularity value
    // a(x*) = f(x*)/(-p''(x*)).
    const double a_star = f_star / (-p_second);
    if (!filled.empty()) {
        const std::size_t lo = filled.front();
        const std::size_t hi = filled.back();
        const bool has_left = lo > 0;
        const bool has_right = hi < m;
        for (std::size_t i : filled) {
            const double xi = p.x(i);
            if (has_left && has_right) {
                const double xl = p.x(lo - 1), xr = p.x(hi + 1);
                const double al = a[lo - 1], ar = a[hi + 1];
                // Lagrange through (xl, al), (x*, a_star), (xr, ar).
                const double l0 = (xi - x_star) * (xi - xr) / ((xl - x_star) * (xl - xr));
                const double l1 = (xi - xl) * (xi - xr) / ((x_star - xl) * (x_star - xr));
                const double l2 = (xi - xl) * (xi - x_star) / ((xr - xl) * (xr - x_star));
                a[i] = l0 * al + l1 * a_star + l2 * ar;
            } else {
                a[i] = a_star;  // window touches the boundary
            }
        }
    }

    double min_rec = a[0];
    for (double v : a.values) min_rec = std::min(min_rec, v);
    if (report) {
        report->x_star = x_star;
        report->p_second_at_star = p_second;
        report->conditioning_warning = conditioning;
        report->min_recovered = min_rec;
        report->guard_violated = min_rec < a_min_guard;
    }
    return a;
}

double forward_stability_ratio(const GridFunction& a1, const GridFunction& a2,
                               const GridFunction& f, double alpha) {
    if (a1.nodes() != a2.nodes() || a1.nodes() != f.nodes())
        throw std::invalid_argument("forward_stability_ratio: mesh mismatch");
    const double den = holder_norm(a1 - a2, alpha);
    if (den == 0.0) return 0.0;
    const GridFunction p1 = solve_elliptic_1d(a1, f);
    const GridFunction p2 = solve_elliptic_1d(a2, f);
    return c_norm(p1 - p2, 2) / den;
}

double inverse_stability_ratio(const GridFunction& a1, const GridFunction& a2,
                               const GridFunction& f) {
    if (a1.nodes() != a2.nodes() || a1.nodes() != f.nodes())
        throw std::invalid_argument("inverse_stability_ratio: mesh mismatch");
    const double num = sup_norm(a1 - a2);
    if (num == 0.0) return 0.0;
    const GridFunction p1 = solve_elliptic_1d(a1, f);
    const GridFunction p2 = solve_elliptic_1d(a2, f);
    const double dp = c_norm(p1 - p2, 2);
    if (dp == 0.0)
        throw std::runtime_error(
            "inverse_stability_ratio: identical pressures for distinct coefficients");
    return num / (c_norm(a1, 1) * dp);
}

StabilitySweep stability_sweep(const UniformPrior& prior, const GridFunction& f,
                               std::size_t n_pairs, double alpha, Rng& rng) {
    StabilitySweep sweep;
    sweep.pairs = n_pairs;
    const std::uint64_t master = rng();
    std::vector<double> fwd(n_pairs), inv(n_pairs), red(n_pairs);
    parallel_for(n_pairs, [&](std::size_t i) {
        Rng local = make_stream(master, i);
        const GridFunction a1 = prior.sample(local);
        const GridFunction a2 = prior.sample(local);
        const GridFunction p1 = solve_elliptic_1d(a1, f);
        const GridFunction p2 = solve_elliptic_1d(a2, f);
        const double dp_c2 = c_norm(p1 - p2, 2);
        const double da_sup = sup_norm(a1 - a2);
        const double da_alpha = holder_norm(a1 - a2, alpha);
        fwd[i] = da_alpha > 0.0 ? dp_c2 / da_alpha : 0.0;
        inv[i] = dp_c2 > 0.0 ? da_sup / (c_norm(a1, 1) * dp_c2) : 0.0;
        red[i] = dp_c2 > 0.0 ? da_sup / dp_c2 : 0.0;
    });
    for (std::size_t i = 0; i < n_pairs; ++i) {
        sweep.max_forward_ratio = std::max(sweep.max_forward_ratio, fwd[i]);
        sweep.max_inverse_ratio = std::max(sweep.max_inverse_ratio, inv[i]);
        sweep.reduction_constant = std::max(sweep.reduction_constant, red[i]);
    }
    return sweep;
}

SpectralField project_sine_basis(const GridFunction& g, std::size_t trunc) {
    const std::size_t m = g.intervals();
    const double h = g.h();
    SpectralField c = SpectralField::zeros(trunc);
    for (std::size_t k = 1; k <= trunc; ++k) {
        double acc = 0.0;
        for (std::size_t i = 1; i < m; ++i)
            acc += g[i] * std::sin(std::numbers::pi * static_cast<double>(k) * g.x(i));
        c.coeffs[k - 1] = std::numbers::sqrt2 * h * acc;
    }
    return c;
}

GridFunction synth_sine_basis(const SpectralField& c, std::size_t m) {
    GridFunction g(m, 0.0);
    for (std::size_t i = 0; i <= m; ++i) {
        double acc = 0.0;
        const double x = g.x(i);
        for (std::size_t k = 1; k <= c.trunc(); ++k)
            acc += c.coeffs[k - 1] * std::numbers::sqrt2 *
                   std::sin(std::numbers::pi * static_cast<double>(k) * x);
        g[i] = acc;
    }
    return g;
}

DataRecord observe(const SpectralField& p, const SmallNoiseModel& model, Rng& rng) {
    if (!(model.n >= 1.0)) throw std::invalid_argument("observe: n must be >= 1");
    DataRecord rec;
    rec.spectral = p;
    if (rec.spectral.trunc() != model.trunc)
        throw std::invalid_argument("observe: field truncation != model truncation");
    SpectralField xi = sample_noise(model.scale, model.trunc, rng);
    xi *= 1.0 / std::sqrt(model.n);
    rec.spectral += xi;
    return rec;
}

DataRecord observe(const GridFunction& p, const ObservationModel& model, Rng& rng) {
    if (std::holds_alternative<SmallNoiseModel>(model)) {
        const auto& sn = std::get<SmallNoiseModel>(model);
        return observe(project_sine_basis(p, sn.trunc), sn, rng);
    }
    const auto& pw = std::get<PointwiseModel>(model);
    if (pw.design.empty()) throw std::invalid_argument("observe: empty design");
    if (!(pw.sigma >= 0.0)) throw std::invalid_argument("observe: sigma must be >= 0");
    for (double x : pw.design)
        if (!(x > 0.0 && x < 1.0))
            throw std::invalid_argument("observe: design points must lie in (0,1)");
    DataRecord rec;
    rec.pointwise.reserve(pw.design.size());
    for (double x : pw.design) rec.pointwise.push_back(p.eval(x) + pw.sigma * standard_normal(rng));
    return rec;
}

std::vector<double> equidistant_design(std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 1; i <= n; ++i)
        xs[i - 1] = static_cast<double>(i) / static_cast<double>(n + 1);
    return xs;
}

DesignReport design_check(const std::vector<double>& points, double K, DesignMode mode) {
    if (points.empty()) throw std::invalid_argument("design_check: empty design");
    for (double x : points)
        if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("design_check: points must be in (0,1)");
    std::vector<double> xs = points;
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    DesignReport rep;
    if (mode == DesignMode::Choi) {
        rep.mode = "choi";
        rep.threshold = 1.0 / (K * n);
        double worst = xs.front();  // gap (0, x_(1))
        double lo = xs.front(), hi = 1.0 - xs.back();
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) worst = std::max(worst, xs[i + 1] - xs[i]);
        worst = std::max({worst, lo, hi});
        rep.worst_gap = worst;
        rep.pass = worst <= rep.threshold + 1e-15;
        rep.worst_description = "largest point-free interval length " + std::to_string(worst);
        return rep;
    }
    rep.mode = "empirical";
    rep.threshold = 0.0;
    // Dyadic endpoint grid; resolution capped by the sample size so cells
    // hold at least a handful of points under a valid design.
    int L = 2;
    while (2 * L <= 64 && static_cast<double>(2 * L) <= n / 4.0) L *= 2;
    double worst_deficit = 0.0;
    double wa = 0, wb = 0;
    for (int i = 0; i < L; ++i) {
        for (int j = i + 1; j <= L; ++j) {
            const double a = static_cast<double>(i) / L;
            const double b = static_cast<double>(j) / L;
            double count = 0.0;
            for (double x : xs) count += (x > a && x <= b) ? 1.0 : 0.0;
            const double deficit = K * (b - a) - count / n;
            if (deficit > worst_deficit) {
                worst_deficit = deficit;
                wa = a;
                wb = b;
            }
        }
    }
    rep.worst_gap = worst_deficit;
    rep.pass = worst_deficit <= 1e-12;
    rep.worst_description = rep.pass ? "no deficit"
                                     : "F_n deficit " + std::to_string(worst_deficit) +
                                           " on (" + std::to_string(wa) + ", " + std::to_string(wb) + "]";
    return rep;
}

}  // namespace postcon
