#include "postcon/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "postcon/io.hpp"

namespace postcon {

double radius_for_level(const std::function<double(double)>& mass_at, double level,
                        double radius_hi) {
    double lo = 0.0, hi = radius_hi;
    double mid = 0.5 * (lo + hi);
    for (int step = 0; step < 12; ++step) {
        mid = 0.5 * (lo + hi);
        const double m = mass_at(mid);
        if (std::abs(m - level) <= 0.02) return mid;
        if (m < level) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

RateFit fit_rate(const ContractionCurve& curve, double level) {
    (void)level;
    std::vector<double> lx, ly;
    std::vector<double> ns;
    for (const auto& row : curve.rows) {
        if (!(row.radius > 0.0) || !(row.n > 0.0)) continue;
        lx.push_back(std::log(row.n));
        ly.push_back(std::log(row.radius));
        ns.push_back(row.n);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.size() < 4)
        throw std::invalid_argument("fit_rate: need at least 4 distinct usable n values");
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    const double intercept = (sy - slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + slope * lx[i]);
        rss += r * r;
    }
    RateFit fit;
    fit.kappa_hat = -slope;
    fit.intercept = intercept;
    fit.residual = std::sqrt(rss / n);
    fit.n_min = ns.front();
    fit.n_max = ns.back();
    fit.points = lx.size();
    return fit;
}

ConjugateCurves run_contraction_conjugate(const ConjugateExperiment& ex) {
    if (ex.n_grid.size() < 2) throw std::invalid_argument("run_contraction: n grid too short");
    for (std::size_t i = 1; i < ex.n_grid.size(); ++i)
        if (!(ex.n_grid[i] > ex.n_grid[i - 1]))
            throw std::invalid_argument("run_contraction: n grid must be increasing");
    const ScaleSpec scale = ScaleSpec::power(ex.r);
    const GaussianPrior prior{ex.t, ex.trunc};

    Rng truth_rng = make_stream(ex.seed, 0);
    const SpectralField truth = prior.sample(truth_rng);

    ConjugateCurves out;
    out.truth = truth;
    out.mass_curve.kind = "conjugate-mass";
    out.mass_curve.norm_desc = "hilbert_t=" + std::to_string(ex.norm_index);
    out.radius_curve.kind = "conjugate-radius";
    out.radius_curve.norm_desc = out.mass_curve.norm_desc;
    out.radius_curve.level = ex.level;

    for (std::size_t i = 0; i < ex.n_grid.size(); ++i) {
        const double n = ex.n_grid[i];
        Rng row_rng = make_stream(ex.seed, i + 1);
        SpectralField xi = sample_noise(scale, ex.trunc, row_rng);
        xi *= 1.0 / std::sqrt(n);
        SpectralField y = truth;
        y += xi;
        const ConjugatePosterior post = conjugate_posterior_diagonal(ex.t, ex.r, y, n);

        std::vector<double> dist(ex.n_draws);
        for (std::size_t s = 0; s < ex.n_draws; ++s) {
            SpectralField a = post.sample(row_rng);
            a -= truth;
            dist[s] = norm_t(a, ex.norm_index, scale);
        }
        std::sort(dist.begin(), dist.end());
        auto mass_at = [&](double radius) {
            const auto it = std::upper_bound(dist.begin(), dist.end(), radius);
            return static_cast<double>(it - dist.begin()) / static_cast<double>(dist.size());
        };

        ContractionRow mrow;
        mrow.n = n;
        mrow.radius = ex.eps;
        mrow.seed = ex.seed;
        mrow.mass.method = BallMassEstimate::Method::ConjugateMc;
        mrow.mass.mass = mass_at(ex.eps);
        mrow.mass.stderr_ =
            std::sqrt(std::max(mrow.mass.mass * (1.0 - mrow.mass.mass), 1.0 / ex.n_draws) /
                      static_cast<double>(ex.n_draws));
        mrow.mass.ess = static_cast<double>(ex.n_draws);
        out.mass_curve.rows.push_back(mrow);

        ContractionRow rrow = mrow;
        rrow.radius = radius_for_level(mass_at, ex.level, dist.back());
        rrow.mass.mass = mass_at(rrow.radius);
        out.radius_curve.rows.push_back(rrow);
    }
    return out;
}

ContractionCurve run_contraction_atom(const std::vector<double>& n_grid, double eps) {
    ContractionCurve curve;
    curve.kind = "atom";
    curve.norm_desc = "any";
    for (double n : n_grid) {
        ContractionRow row;
        row.n = n;
        row.radius = eps;
        row.mass.method = BallMassEstimate::Method::Exact;
        row.mass.mass = 1.0;
        row.mass.stderr_ = 0.0;
        row.mass.ess = 1.0;
        curve.rows.push_back(row);
    }
    return curve;
}

GridExperimentResult run_contraction_large_data(const LargeDataExperiment& ex) {
    GridExperimentResult out;
    out.mass_curve.kind = "large-data";
    out.mass_curve.norm_desc = "sup";
    Rng truth_rng = make_stream(ex.seed, 0);
    out.truth = ex.prior.sample(truth_rng);

    for (std::size_t i = 0; i < ex.n_grid.size(); ++i) {
        const std::size_t n = static_cast<std::size_t>(ex.n_grid[i]);
        Rng row_rng = make_stream(ex.seed, i + 1);
        const std::vector<double> design = equidistant_design(n);
        std::vector<double> y(n);
        for (std::size_t j = 0; j < n; ++j)
            y[j] = out.truth.eval(design[j]) + ex.sigma * standard_normal(row_rng);

        auto draw = [&](Rng& r) { return ex.prior.sample(r); };
        auto logd = [&](const GridFunction& a) {
            return log_density_pointwise(a, design, y, ex.sigma);
        };
        auto dist = [&](const GridFunction& a) { return sup_norm(a - out.truth); };
        BallMassEstimate est =
            importance_ball_mass_grid(draw, logd, dist, ex.eps, ex.n_samples, row_rng);

        ContractionRow row;
        row.n = static_cast<double>(n);
        row.radius = ex.eps;
        row.mass = est;
        row.seed = ex.seed;
        out.mass_curve.rows.push_back(row);
    }
    return out;
}

GridExperimentResult run_contraction_elliptic(const EllipticExperiment& ex) {
    GridExperimentResult out;
    out.mass_curve.kind = "elliptic";
    out.mass_curve.norm_desc = "sup(coefficient)";
    const std::size_t m = ex.prior.mesh();
    const GridFunction f = GridFunction::constant(m, 1.0);

    Rng truth_rng = make_stream(ex.seed, 0);
    out.truth = ex.prior.sample(truth_rng);
    const GridFunction p_truth = solve_elliptic_1d(out.truth, f);

    for (std::size_t i = 0; i < ex.n_grid.size(); ++i) {
        const std::size_t n = static_cast<std::size_t>(ex.n_grid[i]);
        Rng row_rng = make_stream(ex.seed, i + 1);
        const std::vector<double> design = equidistant_design(n);
        std::vector<double> y(n);
        for (std::size_t j = 0; j < n; ++j)
            y[j] = p_truth.eval(design[j]) + ex.sigma * standard_normal(row_rng);

        auto draw = [&](Rng& r) { return ex.prior.sample(r); };
        auto logd = [&](const GridFunction& a) {
            const GridFunction p = solve_elliptic_1d(a, f);
            return log_density_pointwise(p, design, y, ex.sigma);
        };
        auto dist = [&](const GridFunction& a) { return sup_norm(a - out.truth); };
        BallMassEstimate est =
            importance_ball_mass_grid(draw, logd, dist, ex.eps, ex.n_samples, row_rng);

        ContractionRow row;
        row.n = static_cast<double>(n);
        row.radius = ex.eps;
        row.mass = est;
        row.seed = ex.seed;
        out.mass_curve.rows.push_back(row);
    }
    return out;
}

double ReductionCheckResult::slack() const {
    const double se = std::sqrt(lhs.stderr_ * lhs.stderr_ + rhs.stderr_ * rhs.stderr_);
    return lhs.mass - rhs.mass + 3.0 * se;
}

ReductionCheckResult pushforward_reduction_check(const UniformPrior& prior,
                                                 const GridFunction& truth,
                                                 const GridFunction& f,
                                                 const StabilitySweep& sweep,
                                                 const ReductionCheckConfig& cfg) {
    if (!(sweep.pairs > 0) || !(sweep.reduction_constant > 0.0))
        throw std::invalid_argument(
            "pushforward_reduction_check: run a stability sweep first (M-hat unavailable)");
    const double mhat = sweep.reduction_constant;
    const GridFunction p_truth = solve_elliptic_1d(truth, f);

    Rng rng = make_stream(cfg.seed, 17);
    const std::vector<double> design = equidistant_design(cfg.n_obs);
    std::vector<double> y(cfg.n_obs);
    for (std::size_t j = 0; j < cfg.n_obs; ++j)
        y[j] = p_truth.eval(design[j]) + cfg.sigma * standard_normal(rng);

    // One weighted sample serves both masses: the pressure-ball event is a
    // subset of the coefficient-ball event up to the sweep constant.
    std::vector<double> logw(cfg.n_samples);
    std::vector<char> in_lhs(cfg.n_samples), in_rhs(cfg.n_samples);
    const double pressure_radius = cfg.eps / mhat;
    for (std::size_t i = 0; i < cfg.n_samples; ++i) {
        const GridFunction a = prior.sample(rng);
        const GridFunction p = solve_elliptic_1d(a, f);
        logw[i] = log_density_pointwise(p, design, y, cfg.sigma);
        in_lhs[i] = sup_norm(a - truth) <= cfg.eps ? 1 : 0;
        in_rhs[i] = c_norm(p - p_truth, 2) <= pressure_radius ? 1 : 0;
    }
    const double mx = *std::max_element(logw.begin(), logw.end());
    double sw = 0.0, sw2 = 0.0, s_lhs = 0.0, s_rhs = 0.0;
    for (std::size_t i = 0; i < cfg.n_samples; ++i) {
        const double w = std::exp(logw[i] - mx);
        sw += w;
        sw2 += w * w;
        s_lhs += w * in_lhs[i];
        s_rhs += w * in_rhs[i];
    }
    ReductionCheckResult res;
    res.mhat = mhat;
    res.eps = cfg.eps;
    auto finish = [&](double swb, const std::vector<char>& ind) {
        BallMassEstimate est;
        est.method = BallMassEstimate::Method::Importance;
        est.mass = swb / sw;
        double var = 0.0;
        for (std::size_t i = 0; i < cfg.n_samples; ++i) {
            const double w = std::exp(logw[i] - mx);
            const double d = ind[i] - est.mass;
            var += w * w * d * d;
        }
        est.stderr_ = std::sqrt(var) / sw;
        est.ess = sw * sw / sw2;
        if (est.ess < 50.0) {
            est.unreliable = true;
            est.flag = "ESS < 50: unreliable; increase n or use MCMC";
        }
        return est;
    };
    res.lhs = finish(s_lhs, in_lhs);
    res.rhs = finish(s_rhs, in_rhs);
    return res;
}

double inconsistency_ratio(double n, double theta, std::size_t k_max, Rng* rng) {
    if (!(n >= 1.0)) throw std::invalid_argument("inconsistency_ratio: n must be >= 1");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("inconsistency_ratio: theta must be in (0,1)");
    const std::size_t k_required = static_cast<std::size_t>(std::ceil(std::sqrt(n))) + 10;
    if (k_max < k_required)
        throw std::invalid_argument("inconsistency_ratio: k_max must be >= ceil(sqrt(n)) + 10 = " +
                                    std::to_string(k_required));
    const std::size_t n1 = static_cast<std::size_t>(std::llround(n));
    const std::size_t n2 = std::max<std::size_t>(1, static_cast<std::size_t>(std::pow(n, theta)));
    double s_xi = 0.0, s_xit = 0.0;
    if (rng) {
        for (std::size_t j = 0; j < n1; ++j) s_xi += standard_normal(*rng);
        for (std::size_t j = 0; j < n2; ++j) s_xit += standard_normal(*rng);
    }
    auto logsumexp = [](const std::vector<double>& v) {
        const double mx = *std::max_element(v.begin(), v.end());
        double acc = 0.0;
        for (double x : v) acc += std::exp(x - mx);
        return mx + std::log(acc);
    };
    std::vector<double> num(k_max), den(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double kd = static_cast<double>(k);
        num[k - 1] = -n / (2.0 * kd) + s_xi / std::sqrt(kd) - 2.0 * kd * kd;
        den[k - 1] = -n / (8.0 * kd) + s_xi / (2.0 * std::sqrt(kd)) -
                     0.5 * static_cast<double>(n2) + s_xit - kd * kd;
    }
    return logsumexp(num) - logsumexp(den);
}

NormLift stronger_norm_lift(double kappa_cm, double s, double r) {
    if (!(s > 1.0)) throw std::invalid_argument("stronger_norm_lift: s must exceed 1");
    if (!(r >= 1.0 && r <= s))
        throw std::invalid_argument("stronger_norm_lift: r must lie in [1, s]");
    NormLift lift;
    lift.lambda = (s - r) / (s - 1.0);
    lift.kappa = kappa_cm * lift.lambda;
    return lift;
}

void write_curve_csv(const std::string& path, const ContractionCurve& curve,
                     const std::vector<std::string>& comment_lines) {
    std::vector<std::vector<double>> rows;
    rows.reserve(curve.rows.size());
    for (const auto& r : curve.rows)
        rows.push_back({r.n, r.radius, r.mass.mass, r.mass.stderr_, r.mass.ess,
                        r.mass.unreliable ? 1.0 : 0.0, static_cast<double>(r.seed)});
    std::vector<std::string> comments = comment_lines;
    comments.push_back("kind=" + curve.kind + " norm=" + curve.norm_desc);
    write_csv(path, {"n", "radius", "mass", "stderr", "ess", "unreliable", "seed"}, rows, comments);
}

}  // namespace postcon
