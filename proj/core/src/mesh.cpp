#include "hip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hip/errors.hpp"

namespace hip {

Grid::Grid(int n) : n_(n), h_(n > 0 ? 1.0 / n : 0.0) {
    if (n < 8) {
        throw DomainError("grid needs n >= 8, got " + std::to_string(n));
    }
    if (h_ * n_ != 1.0) {
        throw DomainError("grid size " + std::to_string(n) + " does not satisfy h*n == 1 exactly");
    }
}

double Grid::weight(int i, int j) const noexcept {
    const double wx = (i == 0 || i == n_) ? 0.5 * h_ : h_;
    const double wy = (j == 0 || j == n_) ? 0.5 * h_ : h_;
    return wx * wy;
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw DomainError("scalar field has " + std::to_string(values_.size()) +
                          " values, grid needs " + std::to_string(grid_.size()));
    }
    if (!all_finite()) {
        throw DomainError("scalar field contains non-finite values");
    }
}

ScalarField ScalarField::from_function(const Grid& grid,
                                       const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    for (int j = 0; j <= grid.n(); ++j) {
        for (int i = 0; i <= grid.n(); ++i) {
            out(i, j) = f(grid.coord(i), grid.coord(j));
        }
    }
    if (!out.all_finite()) {
        throw DomainError("field initializer produced non-finite values");
    }
    return out;
}

bool ScalarField::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::boundary_max_abs() const noexcept {
    const int n = grid_.n();
    double m = 0.0;
    for (int k = 0; k <= n; ++k) {
        m = std::max({m, std::abs((*this)(k, 0)), std::abs((*this)(k, n)),
                      std::abs((*this)(0, k)), std::abs((*this)(n, k))});
    }
    return m;
}

std::vector<double> ScalarField::interior() const {
    const int n = grid_.n();
    std::vector<double> out(grid_.interior_size());
    for (int j = 1; j < n; ++j) {
        for (int i = 1; i < n; ++i) {
            out[grid_.interior_index(i, j)] = (*this)(i, j);
        }
    }
    return out;
}

ScalarField ScalarField::from_interior(const Grid& grid, std::span<const double> interior) {
    if (interior.size() != grid.interior_size()) {
        throw DomainError("interior vector size does not match grid");
    }
    ScalarField out(grid);
    for (int j = 1; j < grid.n(); ++j) {
        for (int i = 1; i < grid.n(); ++i) {
            out(i, j) = interior[grid.interior_index(i, j)];
        }
    }
    return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    if (!(grid_ == other.grid_)) throw GridMismatch();
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    if (!(grid_ == other.grid_)) throw GridMismatch();
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch();
    ScalarField out(a.grid());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] * b[k];
    return out;
}

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(const Grid& grid) : x_(grid), y_(grid) {}

VectorField::VectorField(ScalarField x, ScalarField y) : x_(std::move(x)), y_(std::move(y)) {
    if (!(x_.grid() == y_.grid())) throw GridMismatch();
}

ScalarField magnitude(const VectorField& v) {
    ScalarField out(v.grid());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::hypot(v.x()[k], v.y()[k]);
    return out;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch();
    ScalarField out(a.grid());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = a.x()[k] * b.x()[k] + a.y()[k] * b.y()[k];
    }
    return out;
}

VectorField scale(const ScalarField& s, const VectorField& v) {
    return VectorField(hadamard(s, v.x()), hadamard(s, v.y()));
}

// ---------------------------------------------------------------------------
// Differences

namespace {

// First difference along one axis. `at(k)` reads the k-th value of the line.
template <class Get>
double line_difference(Get at, int k, int n, double h, Closure closure) {
    if (k > 0 && k < n) return (at(k + 1) - at(k - 1)) / (2.0 * h);
    if (closure == Closure::summation_by_parts) {
        return k == 0 ? (at(1) - at(0)) / h : (at(n) - at(n - 1)) / h;
    }
    return k == 0 ? (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
                  : (3.0 * at(n) - 4.0 * at(n - 1) + at(n - 2)) / (2.0 * h);
}

template <class Get>
double line_second_difference(Get at, int k, int n, double h) {
    const double h2 = h * h;
    if (k > 0 && k < n) return (at(k + 1) - 2.0 * at(k) + at(k - 1)) / h2;
    if (k == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2;
    return (2.0 * at(n) - 5.0 * at(n - 1) + 4.0 * at(n - 2) - at(n - 3)) / h2;
}

}  // namespace

ScalarField diff_x(const ScalarField& f, Closure closure) {
    const Grid& g = f.grid();
    const int n = g.n();
    ScalarField out(g);
    for (int j = 0; j <= n; ++j) {
        auto at = [&](int i) { return f(i, j); };
        for (int i = 0; i <= n; ++i) out(i, j) = line_difference(at, i, n, g.h(), closure);
    }
    return out;
}

ScalarField diff_y(const ScalarField& f, Closure closure) {
    const Grid& g = f.grid();
    const int n = g.n();
    ScalarField out(g);
    for (int i = 0; i <= n; ++i) {
        auto at = [&](int j) { return f(i, j); };
        for (int j = 0; j <= n; ++j) out(i, j) = line_difference(at, j, n, g.h(), closure);
    }
    return out;
}

VectorField gradient(const ScalarField& f, Closure closure) {
    return VectorField(diff_x(f, closure), diff_y(f, closure));
}

ScalarField divergence(const VectorField& v) {
    return diff_x(v.x(), Closure::summation_by_parts) + diff_y(v.y(), Closure::summation_by_parts);
}

// ---------------------------------------------------------------------------
// Norms

double l2_inner(const ScalarField& f, const ScalarField& g) {
    if (!(f.grid() == g.grid())) throw GridMismatch();
    const Grid& grid = f.grid();
    double sum = 0.0;
    for (int j = 0; j <= grid.n(); ++j) {
        for (int i = 0; i <= grid.n(); ++i) sum += grid.weight(i, j) * f(i, j) * g(i, j);
    }
    return sum;
}

double l2_inner(const VectorField& a, const VectorField& b) {
    return l2_inner(a.x(), b.x()) + l2_inner(a.y(), b.y());
}

double l2_norm(const ScalarField& f) { return std::sqrt(l2_inner(f, f)); }
double l2_norm(const VectorField& v) { return std::sqrt(l2_inner(v, v)); }

double h1_norm(const ScalarField& f) {
    const double l2 = l2_inner(f, f);
    const VectorField g = gradient(f);
    return std::sqrt(l2 + l2_inner(g, g));
}

namespace {

// Orthonormal DST-I basis sqrt(2h) sin(k pi i h), applied along both axes.
std::vector<double> sine_table(const Grid& grid) {
    const int m = grid.n() - 1;
    const double scale = std::sqrt(2.0 * grid.h());
    std::vector<double> table(static_cast<std::size_t>(m) * m);
    for (int k = 1; k <= m; ++k) {
        for (int i = 1; i <= m; ++i) {
            table[static_cast<std::size_t>(k - 1) * m + (i - 1)] =
                scale * std::sin(std::numbers::pi * k * i * grid.h());
        }
    }
    return table;
}

// out[l][k] = sum_j sum_i T[l][j] T[k][i] in[j][i] for m x m row-major arrays.
// The table is symmetric, so the same routine is its own inverse.
std::vector<double> separable_transform(const std::vector<double>& table, std::span<const double> in,
                                        int m) {
    const auto um = static_cast<std::size_t>(m);
    std::vector<double> tmp(um * um, 0.0);
    for (std::size_t j = 0; j < um; ++j) {
        for (std::size_t k = 0; k < um; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < um; ++i) s += table[k * um + i] * in[j * um + i];
            tmp[j * um + k] = s;
        }
    }
    std::vector<double> out(um * um, 0.0);
    for (std::size_t l = 0; l < um; ++l) {
        for (std::size_t j = 0; j < um; ++j) {
            const double t = table[l * um + j];
            for (std::size_t k = 0; k < um; ++k) out[l * um + k] += t * tmp[j * um + k];
        }
    }
    return out;
}

}  // namespace

std::vector<double> sine_coefficients(const ScalarField& f) {
    const Grid& grid = f.grid();
    // The table is orthonormal in the Euclidean product; the trapezoidal one carries h^2.
    std::vector<double> c = separable_transform(sine_table(grid), f.interior(), grid.n() - 1);
    for (double& v : c) v *= grid.h();
    return c;
}

ScalarField from_sine_coefficients(const Grid& grid, std::span<const double> coeffs) {
    if (coeffs.size() != grid.interior_size()) {
        throw DomainError("coefficient count does not match grid");
    }
    std::vector<double> interior = separable_transform(sine_table(grid), coeffs, grid.n() - 1);
    for (double& v : interior) v /= grid.h();
    return ScalarField::from_interior(grid, interior);
}

double sobolev_norm(const ScalarField& f, double s) {
    if (!(s >= 0.0)) throw DomainError("sobolev_norm needs s >= 0");
    if (f.boundary_max_abs() != 0.0) {
        throw DomainError("sobolev_norm needs a field vanishing on the boundary ring");
    }
    const int m = f.grid().n() - 1;
    const std::vector<double> c = sine_coefficients(f);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int l = 1; l <= m; ++l) {
        for (int k = 1; k <= m; ++k) {
            const double coef = c[static_cast<std::size_t>(l - 1) * m + (k - 1)];
            sum += std::pow(1.0 + pi2 * (k * k + l * l), s) * coef * coef;
        }
    }
    return std::sqrt(sum);
}

double c2_norm(const ScalarField& f) {
    const Grid& g = f.grid();
    const int n = g.n();
    const ScalarField fx = diff_x(f, Closure::second_order);
    const ScalarField fy = diff_y(f, Closure::second_order);
    const ScalarField fxy = diff_y(fx, Closure::second_order);

    double first = 0.0;
    double second = 0.0;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const double fxx = line_second_difference([&](int k) { return f(k, j); }, i, n, g.h());
            const double fyy = line_second_difference([&](int k) { return f(i, k); }, j, n, g.h());
            first = std::max({first, std::abs(fx(i, j)), std::abs(fy(i, j))});
            second = std::max({second, std::abs(fxx), std::abs(fyy), std::abs(fxy(i, j))});
        }
    }
    return f.max_abs() + first + second;
}

}  // namespace hip
