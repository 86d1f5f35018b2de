#include "hip/factorization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "hip/errors.hpp"

namespace hip {

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw GridMismatch();
}

void require_zero_ring(const ScalarField& f, const char* name) {
    if (f.boundary_max_abs() != 0.0) {
        throw DomainError(std::string(name) + " must vanish on the boundary ring");
    }
}

// The corner at (ci,cj) of cell (i,j) together with its two neighbours along
// the cell edges and the orientation of each edge.
struct Corner {
    int ci, cj;
    int ai, aj;  // horizontal neighbour
    int bi, bj;  // vertical neighbour
    double sx, sy;
};

std::array<Corner, 4> cell_corners(int i, int j) {
    std::array<Corner, 4> out{};
    int k = 0;
    for (int dy = 0; dy <= 1; ++dy) {
        for (int dx = 0; dx <= 1; ++dx) {
            Corner c;
            c.ci = i + dx;
            c.cj = j + dy;
            c.ai = dx == 0 ? i + 1 : i;
            c.aj = c.cj;
            c.bi = c.ci;
            c.bj = dy == 0 ? j + 1 : j;
            c.sx = dx == 0 ? 1.0 : -1.0;
            c.sy = dy == 0 ? 1.0 : -1.0;
            out[k++] = c;
        }
    }
    return out;
}

}  // namespace

ScalarField transport_apply(const ScalarField& u0, const ScalarField& rho) {
    require_same_grid(u0.grid(), rho.grid());
    return dot(gradient(u0), gradient(rho));
}

VectorField project_parallel(const ScalarField& u0, const VectorField& v, double grad_floor) {
    require_same_grid(u0.grid(), v.grid());
    const VectorField g = gradient(u0);
    check_gradient_floor(g, grad_floor);
    VectorField out(u0.grid());
    for (std::size_t k = 0; k < u0.size(); ++k) {
        const double gx = g.x()[k];
        const double gy = g.y()[k];
        const double c = (gx * v.x()[k] + gy * v.y()[k]) / (gx * gx + gy * gy);
        out.x()[k] = c * gx;
        out.y()[k] = c * gy;
    }
    return out;
}

VectorField project_perp(const ScalarField& u0, const VectorField& v, double grad_floor) {
    const VectorField par = project_parallel(u0, v, grad_floor);
    return VectorField(v.x() - par.x(), v.y() - par.y());
}

ProjectedGradientOperator::ProjectedGradientOperator(const Grid& grid, double p, ScalarField sigma,
                                                     VectorField unit, linalg::SparseMatrix matrix)
    : grid_(grid), p_(p), sigma_(std::move(sigma)), unit_(std::move(unit)),
      matrix_(std::move(matrix)) {}

ProjectedGradientOperator assemble_L(const Conductivity& sigma0, const ScalarField& u0, double p,
                                     double grad_floor) {
    validate_exponent(p);
    const Grid& grid = sigma0.grid();
    require_same_grid(grid, u0.grid());
    const VectorField g = gradient(u0);
    check_gradient_floor(g, grad_floor);
    const ScalarField norm = magnitude(g);
    VectorField unit(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        unit.x()[k] = g.x()[k] / norm[k];
        unit.y()[k] = g.y()[k] / norm[k];
    }

    const int n = grid.n();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * n * 4 * 6);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            for (const Corner& c : cell_corners(i, j)) {
                const double s = sigma0.field()(c.ci, c.cj);
                const double ex = unit.x()(c.ci, c.cj);
                const double ey = unit.y()(c.ci, c.cj);
                const double kxx = s * (1.0 - p * ex * ex);
                const double kxy = -s * p * ex * ey;
                const double kyy = s * (1.0 - p * ey * ey);
                // Columns of the 2x3 Jacobian of (dx, dy) over (c, a, b).
                const std::array<std::array<double, 2>, 3> jac{
                    {{-c.sx, -c.sy}, {c.sx, 0.0}, {0.0, c.sy}}};
                const std::array<std::array<int, 2>, 3> nodes{
                    {{c.ci, c.cj}, {c.ai, c.aj}, {c.bi, c.bj}}};
                for (int r = 0; r < 3; ++r) {
                    const auto [ri, rj] = nodes[r];
                    if (grid.on_boundary(ri, rj)) continue;
                    const double kx = kxx * jac[r][0] + kxy * jac[r][1];
                    const double ky = kxy * jac[r][0] + kyy * jac[r][1];
                    for (int q = r; q < 3; ++q) {
                        const auto [qi, qj] = nodes[q];
                        if (grid.on_boundary(qi, qj)) continue;
                        const double m = 0.25 * inv_h2 * (kx * jac[q][0] + ky * jac[q][1]);
                        const auto rr = static_cast<int>(grid.interior_index(ri, rj));
                        const auto qq = static_cast<int>(grid.interior_index(qi, qj));
                        trip.emplace_back(rr, qq, m);
                        if (q != r) trip.emplace_back(qq, rr, m);
                    }
                }
            }
        }
    }
    const auto m = static_cast<Eigen::Index>(grid.interior_size());
    linalg::SparseMatrix mat(m, m);
    mat.setFromTriplets(trip.begin(), trip.end());
    return ProjectedGradientOperator(grid, p, sigma0.field(), std::move(unit), std::move(mat));
}

ScalarField ProjectedGradientOperator::apply(const ScalarField& v) const {
    require_same_grid(grid_, v.grid());
    require_zero_ring(v, "v");
    const std::vector<double> x = v.interior();
    const linalg::Vector y = matrix_ * Eigen::Map<const linalg::Vector>(
                                           x.data(), static_cast<Eigen::Index>(x.size()));
    return ScalarField::from_interior(grid_, std::span<const double>(y.data(), y.size()));
}

double ProjectedGradientOperator::quadratic_form(const ScalarField& v) const {
    return l2_inner(apply(v), v);
}

ProjectedGradientOperator::Split ProjectedGradientOperator::split(const ScalarField& v) const {
    require_same_grid(grid_, v.grid());
    require_zero_ring(v, "v");
    const int n = grid_.n();
    const double h = grid_.h();
    Split out{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            for (const Corner& c : cell_corners(i, j)) {
                const double gx = c.sx * (v(c.ai, c.aj) - v(c.ci, c.cj)) / h;
                const double gy = c.sy * (v(c.bi, c.bj) - v(c.ci, c.cj)) / h;
                const double ex = unit_.x()(c.ci, c.cj);
                const double ey = unit_.y()(c.ci, c.cj);
                const double along = ex * gx + ey * gy;
                const double px = gx - along * ex;
                const double py = gy - along * ey;
                const double w = 0.25 * h * h * sigma_(c.ci, c.cj);
                out.perp += w * (px * px + py * py);
                out.parallel += w * along * along;
            }
        }
    }
    return out;
}

FactorizationSides factorization_sides(const LinearizationBundle& bundle, const ScalarField& rho) {
    const Grid& grid = bundle.grid();
    require_same_grid(grid, rho.grid());
    const ScalarField& s0 = bundle.sigma0().field();

    const ScalarField df = differential(bundle, hadamard(rho, s0));
    ScalarField q(grid);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = df[k] / (s0[k] * bundle.speed_pow()[k]);
    ScalarField lhs = hadamard(s0, transport_apply(bundle.u0(), q));

    const ScalarField t = hadamard(s0, transport_apply(bundle.u0(), rho));
    const ScalarField z = solve_zero_bc(bundle.system(), t);
    const ProjectedGradientOperator op =
        assemble_L(bundle.sigma0(), bundle.u0(), bundle.p(), bundle.grad_floor());
    ScalarField rhs = -1.0 * op.apply(z);
    return {std::move(lhs), std::move(rhs)};
}

double factorization_residual(const LinearizationBundle& bundle, const ScalarField& rho) {
    require_zero_ring(rho, "rho");
    const FactorizationSides sides = factorization_sides(bundle, rho);
    const int n = bundle.grid().n();
    double diff = 0.0;
    double ref = 0.0;
    for (int j = 2; j <= n - 2; ++j) {
        for (int i = 2; i <= n - 2; ++i) {
            const double d = sides.lhs(i, j) - sides.rhs(i, j);
            diff += d * d;
            ref += sides.lhs(i, j) * sides.lhs(i, j);
        }
    }
    if (ref == 0.0) return diff == 0.0 ? 0.0 : INFINITY;
    return std::sqrt(diff / ref);
}

double factorization_residual(const Conductivity& sigma0, const ScalarField& boundary, double p,
                              const ScalarField& rho, const ForwardOptions& options) {
    return factorization_residual(LinearizationBundle(sigma0, boundary, p, options), rho);
}

double l_spectral_bound(const ProjectedGradientOperator& op, const linalg::EigenOptions& opts) {
    return linalg::smallest_eigenpair(op.matrix(), opts).value;
}

double l_spectral_bound(const Conductivity& sigma0, const ScalarField& u0, double p,
                        const linalg::EigenOptions& opts) {
    return l_spectral_bound(assemble_L(sigma0, u0, p), opts);
}

double transport_spectral_bound(const ScalarField& u0, double grad_floor,
                                const linalg::EigenOptions& opts) {
    const Grid& grid = u0.grid();
    const VectorField g = gradient(u0);
    check_gradient_floor(g, grad_floor);
    const int n = grid.n();
    const double h = grid.h();

    // T0 maps interior unknowns to every node, with the same stencils as gradient().
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(grid.size() * 4);
    auto add = [&](int row, int i, int j, double value) {
        if (grid.on_boundary(i, j) || value == 0.0) return;
        trip.emplace_back(row, static_cast<int>(grid.interior_index(i, j)), value);
    };
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const int row = static_cast<int>(grid.index(i, j));
            const double gx = g.x()(i, j);
            const double gy = g.y()(i, j);
            if (i == 0) {
                add(row, 1, j, gx / h);
            } else if (i == n) {
                add(row, n - 1, j, -gx / h);
            } else {
                add(row, i + 1, j, gx / (2 * h));
                add(row, i - 1, j, -gx / (2 * h));
            }
            if (j == 0) {
                add(row, i, 1, gy / h);
            } else if (j == n) {
                add(row, i, n - 1, -gy / h);
            } else {
                add(row, i, j + 1, gy / (2 * h));
                add(row, i, j - 1, -gy / (2 * h));
            }
        }
    }
    linalg::SparseMatrix t(static_cast<Eigen::Index>(grid.size()),
                           static_cast<Eigen::Index>(grid.interior_size()));
    t.setFromTriplets(trip.begin(), trip.end());

    linalg::Vector w(static_cast<Eigen::Index>(grid.size()));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) w[static_cast<Eigen::Index>(grid.index(i, j))] = grid.weight(i, j);
    }
    // Rayleigh quotient ||T0 rho||^2 / ||rho||^2; the interior weight h^2 divides out.
    const linalg::SparseMatrix wt = w.asDiagonal() * t;
    linalg::SparseMatrix normal = (t.transpose() * wt) / (h * h);
    normal = 0.5 * (normal + linalg::SparseMatrix(normal.transpose()));
    return std::sqrt(linalg::smallest_eigenpair(normal, opts).value);
}

HarmonicConjugate harmonic_conjugate(const Conductivity& sigma0, const ScalarField& u0,
                                     double tol) {
    const Grid& grid = sigma0.grid();
    require_same_grid(grid, u0.grid());
    const VectorField g = gradient(u0, Closure::second_order);
    const ScalarField a = hadamard(sigma0.field(), g.y());         // d/dx of the conjugate
    const ScalarField b = -1.0 * hadamard(sigma0.field(), g.x());  // d/dy of the conjugate
    const int n = grid.n();
    const double half_h = 0.5 * grid.h();

    ScalarField first(grid);
    for (int i = 1; i <= n; ++i) first(i, 0) = first(i - 1, 0) + half_h * (a(i - 1, 0) + a(i, 0));
    for (int i = 0; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) first(i, j) = first(i, j - 1) + half_h * (b(i, j - 1) + b(i, j));
    }
    ScalarField second(grid);
    for (int j = 1; j <= n; ++j) second(0, j) = second(0, j - 1) + half_h * (b(0, j - 1) + b(0, j));
    for (int j = 0; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) second(i, j) = second(i - 1, j) + half_h * (a(i - 1, j) + a(i, j));
    }
    const double residual = (first - second).max_abs();
    if (!(residual <= tol)) {
        throw DomainError("u0 is not sigma0-harmonic: conjugate path residual " +
                          std::to_string(residual) + " exceeds " + std::to_string(tol));
    }
    return {std::move(first), residual};
}

ScalarField wave_speed(const ScalarField& u0, double grad_floor) {
    const VectorField g = gradient(u0);
    check_gradient_floor(g, grad_floor);
    ScalarField c = magnitude(g);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = 1.0 / c[k];
    return c;
}

}  // namespace hip
