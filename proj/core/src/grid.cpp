#include "postcon/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "postcon/rng.hpp"

namespace postcon {

namespace {
void check_mesh(std::size_t n_nodes, const char* where) {
    if (n_nodes < 5)
        throw std::invalid_argument(std::string(where) + ": mesh must have m >= 4 intervals");
}
}  // namespace

GridFunction::GridFunction(std::vector<double> v) : values(std::move(v)) {
    check_mesh(values.size(), "GridFunction");
    for (double x : values)
        if (!std::isfinite(x)) throw std::invalid_argument("GridFunction: non-finite value");
}

GridFunction::GridFunction(std::size_t m, double fill) : values(m + 1, fill) {
    check_mesh(values.size(), "GridFunction");
}

GridFunction GridFunction::from_callable(std::size_t m, const std::function<double(double)>& f) {
    GridFunction g(m, 0.0);
    for (std::size_t i = 0; i <= m; ++i) g.values[i] = f(g.x(i));
    return g;
}

double GridFunction::eval(double x) const {
    if (x <= 0.0) return values.front();
    if (x >= 1.0) return values.back();
    const double t = x * static_cast<double>(intervals());
    const std::size_t i = std::min(static_cast<std::size_t>(t), intervals() - 1);
    const double w = t - static_cast<double>(i);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    if (values.size() != o.values.size()) throw std::invalid_argument("GridFunction: mesh mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    if (values.size() != o.values.size()) throw std::invalid_argument("GridFunction: mesh mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double c) {
    for (double& v : values) v *= c;
    return *this;
}

GridFunction derivative(const GridFunction& g) {
    const std::size_t m = g.intervals();
    const double h = g.h();
    GridFunction d(m, 0.0);
    d.values[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
    for (std::size_t i = 1; i < m; ++i) d.values[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
    d.values[m] = (3.0 * g[m] - 4.0 * g[m - 1] + g[m - 2]) / (2.0 * h);
    return d;
}

GridFunction second_derivative(const GridFunction& g) {
    const std::size_t m = g.intervals();
    const double h2 = g.h() * g.h();
    GridFunction d(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) d.values[i] = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / h2;
    d.values[0] = (g[2] - 2.0 * g[1] + g[0]) / h2;
    d.values[m] = (g[m] - 2.0 * g[m - 1] + g[m - 2]) / h2;
    return d;
}

GridFunction cumulative_integral(const GridFunction& g) {
    const std::size_t m = g.intervals();
    const double h = g.h();
    GridFunction out(m, 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
        acc += 0.5 * h * (g[i - 1] + g[i]);
        out.values[i] = acc;
    }
    return out;
}

double sup_norm(const GridFunction& g) {
    double s = 0.0;
    for (double v : g.values) s = std::max(s, std::abs(v));
    return s;
}

double holder_seminorm(const GridFunction& g, double beta) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("holder_seminorm: beta must be in (0, 1]");
    const std::size_t n = g.nodes();
    const double h = g.h();
    double best = 0.0;
    auto ratio = [&](std::size_t i, std::size_t j) {
        const double dx = static_cast<double>(j - i) * h;
        return std::abs(g[j] - g[i]) / std::pow(dx, beta);
    };
    if (n <= 128) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, ratio(i, j));
    } else {
        Rng rng = make_stream(0x486f656c646572ULL);  // fixed: same pairs per grid size
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (int k = 0; k < 10000; ++k) {
            std::size_t i = pick(rng), j = pick(rng);
            if (i == j) continue;
            if (i > j) std::swap(i, j);
            best = std::max(best, ratio(i, j));
        }
    }
    return best;
}

double holder_norm(const GridFunction& g, double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("holder_norm: alpha must be >= 0");
    int k = static_cast<int>(std::floor(alpha));
    double beta = alpha - k;
    // alpha = k exactly: top term is the sup of the k-th difference quotient.
    GridFunction d = g;
    double total = sup_norm(d);
    for (int j = 1; j <= k; ++j) {
        d = derivative(d);
        total += sup_norm(d);
    }
    if (beta > 0.0) total += holder_seminorm(d, beta);
    return total;
}

double c_norm(const GridFunction& g, int k) { return holder_norm(g, static_cast<double>(k)); }

void write_grid_csv(const std::string& path, const GridFunction& g,
                    const std::vector<std::string>& comment_lines) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_grid_csv: cannot open " + path);
    out.precision(17);
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    out << "x,value\n";
    for (std::size_t i = 0; i < g.nodes(); ++i) out << g.x(i) << "," << g[i] << "\n";
}

GridFunction read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_grid_csv: cannot open " + path);
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        vals.push_back(std::stod(line.substr(comma + 1)));
    }
    return GridFunction(std::move(vals));
}

}  // namespace postcon
