#include "hip/elliptic.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "hip/errors.hpp"

namespace hip {

Conductivity::Conductivity(ScalarField field) : field_(std::move(field)), sigma_min_(0.0) {
    if (!field_.all_finite()) throw DomainError("conductivity has non-finite values");
    sigma_min_ = field_.min();
    if (!(sigma_min_ > 0.0)) {
        throw DomainError("conductivity must be positive, minimum is " + std::to_string(sigma_min_));
    }
}

Conductivity::Conductivity(ScalarField field, double sigma_min)
    : field_(std::move(field)), sigma_min_(sigma_min) {
    if (!field_.all_finite()) throw DomainError("conductivity has non-finite values");
    if (!(sigma_min_ > 0.0)) throw DomainError("conductivity lower bound must be positive");
    if (field_.min() < sigma_min_) {
        throw DomainError("conductivity drops below its certified lower bound");
    }
}

DirichletSystem::DirichletSystem(const Grid& grid, SolverOptions options, std::vector<double> ix,
                                 std::vector<double> iy, linalg::SparseMatrix matrix)
    : grid_(grid),
      options_(options),
      ix_(std::move(ix)),
      iy_(std::move(iy)),
      matrix_(std::move(matrix)),
      precond_(matrix_) {}

double DirichletSystem::interface_x(int i, int j) const noexcept {
    return ix_[static_cast<std::size_t>(j) * grid_.n() + i];
}

double DirichletSystem::interface_y(int i, int j) const noexcept {
    return iy_[static_cast<std::size_t>(j) * grid_.side() + i];
}

std::vector<double> DirichletSystem::boundary_lift(const ScalarField& boundary) const {
    if (!(boundary.grid() == grid_)) throw GridMismatch();
    const int n = grid_.n();
    const double inv_h2 = 1.0 / (grid_.h() * grid_.h());
    std::vector<double> lift(grid_.interior_size(), 0.0);
    for (int j = 1; j < n; ++j) {
        for (int i = 1; i < n; ++i) {
            double s = 0.0;
            if (i == 1) s += interface_x(0, j) * boundary(0, j);
            if (i == n - 1) s += interface_x(n - 1, j) * boundary(n, j);
            if (j == 1) s += interface_y(i, 0) * boundary(i, 0);
            if (j == n - 1) s += interface_y(i, n - 1) * boundary(i, n);
            lift[grid_.interior_index(i, j)] = s * inv_h2;
        }
    }
    return lift;
}

ScalarField DirichletSystem::apply(const ScalarField& u) const {
    if (!(u.grid() == grid_)) throw GridMismatch();
    const int n = grid_.n();
    const double inv_h2 = 1.0 / (grid_.h() * grid_.h());
    ScalarField out(grid_);
    for (int j = 1; j < n; ++j) {
        for (int i = 1; i < n; ++i) {
            const double c = u(i, j);
            out(i, j) = inv_h2 * (interface_x(i, j) * (u(i + 1, j) - c) +
                                  interface_x(i - 1, j) * (u(i - 1, j) - c) +
                                  interface_y(i, j) * (u(i, j + 1) - c) +
                                  interface_y(i, j - 1) * (u(i, j - 1) - c));
        }
    }
    return out;
}

DirichletSystem assemble(const Conductivity& sigma, const SolverOptions& options) {
    const Grid& grid = sigma.grid();
    const ScalarField& s = sigma.field();
    const int n = grid.n();

    std::vector<double> ix(static_cast<std::size_t>(n) * grid.side());
    std::vector<double> iy(static_cast<std::size_t>(n) * grid.side());
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i < n; ++i) {
            ix[static_cast<std::size_t>(j) * n + i] = 0.5 * (s(i, j) + s(i + 1, j));
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= n; ++i) {
            iy[static_cast<std::size_t>(j) * grid.side() + i] = 0.5 * (s(i, j) + s(i, j + 1));
        }
    }

    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(grid.interior_size() * 5);
    auto diag = [&](int i, int j, double v) {
        const auto k = static_cast<Eigen::Index>(grid.interior_index(i, j));
        triplets.emplace_back(k, k, v);
    };
    // One off-diagonal value per edge, mirrored, so the matrix is symmetric bit for bit.
    auto edge = [&](int i0, int j0, int i1, int j1, double coef) {
        const double v = coef * inv_h2;
        const bool in0 = !grid.on_boundary(i0, j0);
        const bool in1 = !grid.on_boundary(i1, j1);
        if (in0) diag(i0, j0, v);
        if (in1) diag(i1, j1, v);
        if (in0 && in1) {
            const auto a = static_cast<Eigen::Index>(grid.interior_index(i0, j0));
            const auto b = static_cast<Eigen::Index>(grid.interior_index(i1, j1));
            triplets.emplace_back(a, b, -v);
            triplets.emplace_back(b, a, -v);
        }
    };
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < n; ++i) edge(i, j, i + 1, j, ix[static_cast<std::size_t>(j) * n + i]);
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 1; i < n; ++i) {
            edge(i, j, i, j + 1, iy[static_cast<std::size_t>(j) * grid.side() + i]);
        }
    }
    const auto m = static_cast<Eigen::Index>(grid.interior_size());
    linalg::SparseMatrix a(m, m);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();
    return DirichletSystem(grid, options, std::move(ix), std::move(iy), std::move(a));
}

namespace {

linalg::Vector solve_interior(const DirichletSystem& sys, const linalg::Vector& b) {
    linalg::Vector x = linalg::Vector::Zero(b.size());
    const linalg::CgOptions opts{sys.options().rel_tol,
                                 sys.options().max_iter_factor * sys.grid().n()};
    const auto& a = sys.matrix();
    const linalg::CgReport rep =
        linalg::pcg([&](const linalg::Vector& p) -> linalg::Vector { return a * p; },
                    sys.preconditioner(), b, x, opts);
    if (!rep.converged) {
        throw SolverError("Dirichlet solve stopped after " + std::to_string(rep.iterations) +
                          " iterations at relative residual " + std::to_string(rep.rel_residual));
    }
    return x;
}

}  // namespace

ScalarField solve_dirichlet(const DirichletSystem& sys, const ScalarField& boundary,
                            const ScalarField& rhs) {
    const Grid& grid = sys.grid();
    if (!(boundary.grid() == grid) || !(rhs.grid() == grid)) throw GridMismatch();
    if (!boundary.all_finite() || !rhs.all_finite()) {
        throw DomainError("Dirichlet solve received non-finite data");
    }
    const std::vector<double> lift = sys.boundary_lift(boundary);
    linalg::Vector b(static_cast<Eigen::Index>(grid.interior_size()));
    for (int j = 1; j < grid.n(); ++j) {
        for (int i = 1; i < grid.n(); ++i) {
            const std::size_t k = grid.interior_index(i, j);
            b[static_cast<Eigen::Index>(k)] = lift[k] - rhs(i, j);
        }
    }
    const linalg::Vector x = solve_interior(sys, b);
    ScalarField u(grid);
    for (int j = 0; j <= grid.n(); ++j) {
        for (int i = 0; i <= grid.n(); ++i) {
            u(i, j) = grid.on_boundary(i, j)
                          ? boundary(i, j)
                          : x[static_cast<Eigen::Index>(grid.interior_index(i, j))];
        }
    }
    return u;
}

ScalarField solve_zero_bc(const DirichletSystem& sys, const ScalarField& rhs) {
    return solve_dirichlet(sys, ScalarField(sys.grid()), rhs);
}

ScalarField flux_divergence(const ScalarField& coef, const ScalarField& u) {
    if (!(coef.grid() == u.grid())) throw GridMismatch();
    const Grid& grid = u.grid();
    const int n = grid.n();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    ScalarField out(grid);
    for (int j = 1; j < n; ++j) {
        for (int i = 1; i < n; ++i) {
            const double c = u(i, j);
            const double k = coef(i, j);
            out(i, j) = inv_h2 * (0.5 * (k + coef(i + 1, j)) * (u(i + 1, j) - c) +
                                  0.5 * (k + coef(i - 1, j)) * (u(i - 1, j) - c) +
                                  0.5 * (k + coef(i, j + 1)) * (u(i, j + 1) - c) +
                                  0.5 * (k + coef(i, j - 1)) * (u(i, j - 1) - c));
        }
    }
    return out;
}

}  // namespace hip
