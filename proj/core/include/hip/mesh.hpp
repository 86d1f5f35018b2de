#pragma once

// Uniform grids on the unit square, nodal fields, discrete calculus and the
// discrete norms used throughout the library.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hip {

/// Uniform (n+1) x (n+1) node grid on (0,1)^2 with spacing h = 1/n.
class Grid {
public:
    /// Throws DomainError unless n >= 8 and h*n == 1 exactly.
    explicit Grid(int n);

    int n() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    int side() const noexcept { return n_ + 1; }
    std::size_t size() const noexcept {
        return static_cast<std::size_t>(side()) * static_cast<std::size_t>(side());
    }
    /// Number of interior nodes, (n-1)^2.
    std::size_t interior_size() const noexcept {
        return static_cast<std::size_t>(n_ - 1) * static_cast<std::size_t>(n_ - 1);
    }

    /// Row-major, j (y) outer, i (x) inner.
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(side()) +
               static_cast<std::size_t>(i);
    }
    /// Index into the interior unknown vector, valid for 1 <= i,j <= n-1.
    std::size_t interior_index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(n_ - 1) +
               static_cast<std::size_t>(i - 1);
    }
    double coord(int i) const noexcept { return i * h_; }
    bool on_boundary(int i, int j) const noexcept {
        return i == 0 || j == 0 || i == n_ || j == n_;
    }
    /// Trapezoidal quadrature weight of node (i,j).
    double weight(int i, int j) const noexcept;

    friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.n_ == b.n_; }

private:
    int n_;
    double h_;
};

class ScalarField {
public:
    explicit ScalarField(const Grid& grid, double fill = 0.0);
    /// Throws DomainError on a size mismatch or a non-finite value.
    ScalarField(const Grid& grid, std::vector<double> values);

    static ScalarField from_function(const Grid& grid,
                                     const std::function<double(double, double)>& f);

    const Grid& grid() const noexcept { return grid_; }
    double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
    double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double& operator[](std::size_t k) noexcept { return values_[k]; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool all_finite() const noexcept;
    double max_abs() const noexcept;
    double min() const noexcept;
    double max() const noexcept;
    /// Largest |value| over the boundary ring.
    double boundary_max_abs() const noexcept;

    /// Interior values in interior_index order.
    std::vector<double> interior() const;
    /// Field with the given interior values and zero boundary ring.
    static ScalarField from_interior(const Grid& grid, std::span<const double> interior);

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s) noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator*(ScalarField a, double s);
/// Nodewise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

class VectorField {
public:
    explicit VectorField(const Grid& grid);
    VectorField(ScalarField x, ScalarField y);

    const Grid& grid() const noexcept { return x_.grid(); }
    const ScalarField& x() const noexcept { return x_; }
    const ScalarField& y() const noexcept { return y_; }
    ScalarField& x() noexcept { return x_; }
    ScalarField& y() noexcept { return y_; }
    bool all_finite() const noexcept { return x_.all_finite() && y_.all_finite(); }

private:
    ScalarField x_;
    ScalarField y_;
};

/// Nodewise Euclidean length.
ScalarField magnitude(const VectorField& v);
/// Nodewise dot product.
ScalarField dot(const VectorField& a, const VectorField& b);
/// Nodewise scaling of a vector field by a scalar field.
VectorField scale(const ScalarField& s, const VectorField& v);

/// Boundary treatment of first differences.
///  - summation_by_parts: (f1 - f0)/h, the closure for which divergence is
///    the exact negative adjoint of gradient under trapezoidal weights.
///  - second_order: (-3 f0 + 4 f1 - f2)/(2h).
/// Interior nodes always use central differences.
enum class Closure { summation_by_parts, second_order };

ScalarField diff_x(const ScalarField& f, Closure closure = Closure::summation_by_parts);
ScalarField diff_y(const ScalarField& f, Closure closure = Closure::summation_by_parts);
VectorField gradient(const ScalarField& f, Closure closure = Closure::summation_by_parts);

/// div v with the summation-by-parts stencils:
/// <grad f, v> = -<f, div v> for every f vanishing on the boundary ring.
ScalarField divergence(const VectorField& v);

/// Trapezoidal L2(Omega) inner product.
double l2_inner(const ScalarField& f, const ScalarField& g);
double l2_inner(const VectorField& a, const VectorField& b);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);

/// (||f||^2 + ||grad f||^2)^{1/2}; valid for any boundary values.
double h1_norm(const ScalarField& f);

/// Coefficients of a zero-boundary field in the L2-orthonormal Dirichlet
/// eigenbasis 2 sin(k pi x) sin(l pi y), 1 <= k,l <= n-1; entry (k-1)+(l-1)(n-1).
std::vector<double> sine_coefficients(const ScalarField& f);
/// Inverse of sine_coefficients.
ScalarField from_sine_coefficients(const Grid& grid, std::span<const double> coeffs);

/// Spectral H^s_0 norm: (sum (1 + pi^2 (k^2 + l^2))^s c_kl^2)^{1/2}.
/// Throws DomainError for s < 0 or a nonzero boundary ring.
double sobolev_norm(const ScalarField& f, double s);

/// Grid surrogate of the C^2 norm: sup|f| + sup|first differences| + sup|second differences|.
double c2_norm(const ScalarField& f);

}  // namespace hip
