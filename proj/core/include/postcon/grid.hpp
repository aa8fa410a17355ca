#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace postcon {

/// Real values on the uniform mesh x_i = i/m, i = 0..m, over [0,1].
struct GridFunction {
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(std::vector<double> v);
    GridFunction(std::size_t m, double fill);

    static GridFunction constant(std::size_t m, double c) { return GridFunction(m, c); }
    static GridFunction from_callable(std::size_t m, const std::function<double(double)>& f);

    std::size_t intervals() const { return values.size() - 1; }  // m
    std::size_t nodes() const { return values.size(); }
    double h() const { return 1.0 / static_cast<double>(intervals()); }
    double x(std::size_t i) const { return static_cast<double>(i) * h(); }

    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    /// Piecewise-linear evaluation at x in [0,1].
    double eval(double x) const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(double c);
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(double c, GridFunction a) { return a *= c; }
};

/// Centered first differences, second-order one-sided at the boundary.
GridFunction derivative(const GridFunction& g);

/// Centered second differences, one-sided copies at the boundary nodes.
GridFunction second_derivative(const GridFunction& g);

/// Trapezoid antiderivative: out[i] = integral of g over [0, x_i].
GridFunction cumulative_integral(const GridFunction& g);

double sup_norm(const GridFunction& g);

/// Discrete Hoelder seminorm sup |g(x_i)-g(x_j)| / |x_i-x_j|^beta.
/// All pairs when the grid has <= 128 nodes, otherwise 10^4 pairs drawn from
/// a fixed-seed generator, so the value is deterministic for a given grid
/// size.  The subsampled value is a lower bound of the full seminorm.
double holder_seminorm(const GridFunction& g, double beta);

/// Discrete C^alpha norm.  For alpha = k integer: sum of sup norms of the
/// 0..k-th difference quotients.  For alpha = k + beta, beta in (0,1): adds
/// the beta-seminorm of the k-th difference quotient.
double holder_norm(const GridFunction& g, double alpha);

/// Convenience: discrete C^k norm (k integer), sum_{j<=k} sup |D^j g|.
double c_norm(const GridFunction& g, int k);

/// CSV import/export with (x, value) columns and one header line.
void write_grid_csv(const std::string& path, const GridFunction& g,
                    const std::vector<std::string>& comment_lines = {});
GridFunction read_grid_csv(const std::string& path);

}  // namespace postcon
