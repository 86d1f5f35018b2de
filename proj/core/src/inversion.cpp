#include "hip/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "hip/errors.hpp"
#include "hip/linalg.hpp"
#include "hip/parallel.hpp"

namespace hip {

void InversionOptions::validate() const {
    if (!(reg_lambda >= 0.0)) throw DomainError("reg_lambda must be >= 0");
    if (max_outer_iters < 1) throw DomainError("max_outer_iters must be >= 1");
    if (!(cg_tol >= 0.0)) throw DomainError("cg_tol must be >= 0");
    if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("damping must lie in (0,1]");
    if (!(sigma_projection_min > 0.0)) throw DomainError("sigma_projection_min must be > 0");
    if (!(inner_tol > 0.0)) throw DomainError("inner_tol must be > 0");
    if (inner_max_iter < 1) throw DomainError("inner_max_iter must be >= 1");
    if (!(c2_radius > 0.0)) throw DomainError("c2_radius must be > 0");
    if (!(stagnation_tol >= 0.0)) throw DomainError("stagnation_tol must be >= 0");
}

// ---------------------------------------------------------------------------
// CSV

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << sweep_csv_header << '\n';
    char buf[512];
    for (const SweepRecord& r : records) {
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.eps, r.l2_h,
                      r.h1_dF, r.hs1_h, r.rec_err, r.extra);
        out << r.label << buf;
    }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != sweep_csv_header) {
        throw DomainError("sweep csv: missing or wrong header");
    }
    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) throw DomainError("sweep csv: expected 7 columns in '" + line + "'");
        SweepRecord r;
        r.label = cells[0];
        double* slots[6] = {&r.eps, &r.l2_h, &r.h1_dF, &r.hs1_h, &r.rec_err, &r.extra};
        for (int c = 0; c < 6; ++c) {
            const std::string& s = cells[static_cast<std::size_t>(c) + 1];
            std::size_t used = 0;
            try {
                *slots[c] = std::stod(s, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != s.size()) throw DomainError("sweep csv: bad number '" + s + "'");
        }
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Adjoint and linear inversion

ScalarField apply_dF_adjoint(const LinearizationBundle& bundle, const ScalarField& g) {
    const Grid& grid = bundle.grid();
    if (!(g.grid() == grid)) throw GridMismatch();
    const ScalarField& s0 = bundle.sigma0().field();
    const double p = bundle.p();

    ScalarField coef(grid);
    for (std::size_t k = 0; k < coef.size(); ++k) {
        coef[k] = p * s0[k] * std::pow(bundle.grad_norm()[k], p - 2.0) * g[k];
    }
    const ScalarField q = divergence(scale(coef, bundle.grad_u0()));
    const ScalarField psi = solve_zero_bc(bundle.system(), -1.0 * q);

    // dF's second term is bilinear in (h, psi) through the edge stencil of
    // flux_divergence; collect each node's share of the edge sum.
    const ScalarField& u = bundle.u0();
    const int n = grid.n();
    ScalarField out = hadamard(bundle.speed_pow(), g);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            double acc = 0.0;
            auto edge = [&](int a, int b) {
                acc += (u(a, b) - u(i, j)) * (psi(a, b) - psi(i, j));
            };
            if (i > 0) edge(i - 1, j);
            if (i < n) edge(i + 1, j);
            if (j > 0) edge(i, j - 1);
            if (j < n) edge(i, j + 1);
            out(i, j) += acc / (2.0 * grid.weight(i, j));
        }
    }
    return out;
}

LinearInversion linear_invert(const LinearizationBundle& bundle, const ScalarField& data_perturbation,
                              const InversionOptions& opts) {
    opts.validate();
    const Grid& grid = bundle.grid();
    if (!(data_perturbation.grid() == grid)) throw GridMismatch();
    const int n = grid.n();
    const int m = n - 1;
    const double h2 = grid.h() * grid.h();
    const double lambda = opts.reg_lambda;

    auto to_vector = [](const std::vector<double>& v) {
        return linalg::Vector(Eigen::Map<const linalg::Vector>(v.data(),
                                                               static_cast<Eigen::Index>(v.size())));
    };
    auto apply = [&](const linalg::Vector& x) {
        const ScalarField hf =
            ScalarField::from_interior(grid, std::span<const double>(x.data(), x.size()));
        linalg::Vector y =
            to_vector(apply_dF_adjoint(bundle, differential(bundle, hf)).interior());
        if (lambda > 0.0) {
            for (int b = 0; b < m; ++b) {
                for (int a = 0; a < m; ++a) {
                    const Eigen::Index k = b * m + a;
                    double lap = 4.0 * x[k];
                    if (a > 0) lap -= x[k - 1];
                    if (a < m - 1) lap -= x[k + 1];
                    if (b > 0) lap -= x[k - m];
                    if (b < m - 1) lap -= x[k + m];
                    y[k] += lambda * (x[k] + lap / h2);
                }
            }
        }
        return y;
    };

    const linalg::Vector b = to_vector(apply_dF_adjoint(bundle, data_perturbation).interior());
    const double d2 = l2_inner(data_perturbation, data_perturbation);
    LinearInversion result{ScalarField(grid), {d2}, 0, 0.0};
    linalg::Vector x = linalg::Vector::Zero(b.size());
    const linalg::CgReport report = linalg::pcg(
        apply, linalg::IdentityPreconditioner{}, b, x, {opts.inner_tol, opts.inner_max_iter},
        [&](int, const linalg::Vector& xk, const linalg::Vector& rk) {
            // For the quadratic J(x) = h^2 (x^T N x - 2 x^T b) + ||d||^2 with residual r = b - N x.
            result.objective.push_back(-h2 * xk.dot(b + rk) + d2);
        });
    if (!report.converged) {
        throw SolverError("linear_invert: CG reached relative residual " +
                          std::to_string(report.rel_residual) + " after " +
                          std::to_string(report.iterations) + " iterations");
    }
    result.h = ScalarField::from_interior(grid, std::span<const double>(x.data(), x.size()));
    result.iterations = report.iterations;
    result.rel_residual = report.rel_residual;
    return result;
}

// ---------------------------------------------------------------------------
// Gauss-Newton

Reconstruction gauss_newton_reconstruct(const Conductivity& sigma_init, const ScalarField& boundary,
                                        double p, const ScalarField& data,
                                        const InversionOptions& opts, const ScalarField* truth) {
    opts.validate();
    validate_exponent(p);
    const Grid& grid = sigma_init.grid();
    if (!(data.grid() == grid) || !(boundary.grid() == grid)) throw GridMismatch();
    if (truth && !(truth->grid() == grid)) throw GridMismatch();

    const double data_norm = l2_norm(data);
    const double truth_norm = truth ? l2_norm(*truth) : 0.0;
    auto record = [&](int it, const ScalarField& sigma, const ScalarField& f_sigma, double step) {
        IterateRecord r;
        r.iteration = it;
        r.misfit = l2_norm(data - f_sigma);
        r.rel_misfit = data_norm > 0.0 ? r.misfit / data_norm : r.misfit;
        r.error = truth && truth_norm > 0.0 ? l2_norm(sigma - *truth) / truth_norm : 0.0;
        r.step = step;
        return r;
    };

    Reconstruction out{sigma_init.field(), {}, false};
    ScalarField f_sigma = forward_map(sigma_init, boundary, p, opts.forward);
    out.log.push_back(record(0, out.sigma, f_sigma, 0.0));

    for (int it = 1; it <= opts.max_outer_iters; ++it) {
        if (out.log.back().rel_misfit < opts.cg_tol) break;
        const LinearizationBundle bundle(Conductivity(out.sigma), boundary, p, opts.forward);
        const ScalarField delta = linear_invert(bundle, data - f_sigma, opts).h;

        double step = opts.damping;
        bool accepted = false;
        for (int attempt = 0; attempt <= 3 && !accepted; ++attempt, step *= 0.5) {
            ScalarField trial = out.sigma + step * delta;
            for (std::size_t k = 0; k < trial.size(); ++k) {
                trial[k] = std::max(trial[k], opts.sigma_projection_min);
            }
            const double c2 = c2_norm(trial - sigma_init.field());
            if (!(c2 <= opts.c2_radius)) {
                throw DivergenceError("iterate " + std::to_string(it) +
                                      " left the C2 neighbourhood: c2_norm " + std::to_string(c2) +
                                      " > " + std::to_string(opts.c2_radius));
            }
            ScalarField f_trial = forward_map(Conductivity(trial), boundary, p, opts.forward);
            IterateRecord r = record(it, trial, f_trial, step);
            if (r.misfit <= out.log.back().misfit) {
                out.sigma = std::move(trial);
                f_sigma = std::move(f_trial);
                out.log.push_back(r);
                accepted = true;
            }
        }
        if (!accepted) {
            throw DivergenceError("misfit increased for 3 consecutive damped steps at iterate " +
                                  std::to_string(it));
        }
        const double before = out.log[out.log.size() - 2].misfit;
        if (before - out.log.back().misfit <= opts.stagnation_tol * before &&
            !(out.log.back().rel_misfit < opts.cg_tol)) {
            out.stagnated = true;
            break;
        }
    }
    out.converged = out.log.back().rel_misfit < opts.cg_tol;
    return out;
}

// ---------------------------------------------------------------------------
// Noise and fitting

ScalarField make_noise(const ScalarField& data, double level, std::uint64_t seed) {
    if (!(level >= 0.0)) throw DomainError("noise level must be >= 0");
    const Grid& grid = data.grid();
    const double target = level * h1_norm(data);
    if (target == 0.0) return ScalarField(grid);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ScalarField white(grid);
    for (std::size_t k = 0; k < white.size(); ++k) white[k] = normal(rng);
    const DirichletSystem unit = assemble(Conductivity(ScalarField(grid, 1.0)));
    ScalarField noise = solve_zero_bc(unit, white);
    noise *= target / h1_norm(noise);
    return noise;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("fit_power_law: size mismatch");
    if (x.size() < 3) throw DomainError("fit_power_law: need at least 3 points");
    const auto m = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw DomainError("fit_power_law: nonpositive entry");
        lx[k] = std::log(x[k]);
        ly[k] = std::log(y[k]);
        sx += lx[k];
        sy += ly[k];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
        syy += (ly[k] - my) * (ly[k] - my);
    }
    if (sxx == 0.0) throw DomainError("fit_power_law: x values are all equal");
    PowerFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

double column(const SweepRecord& r, SweepColumn c) {
    switch (c) {
        case SweepColumn::eps: return r.eps;
        case SweepColumn::l2_h: return r.l2_h;
        case SweepColumn::h1_dF: return r.h1_dF;
        case SweepColumn::hs1_h: return r.hs1_h;
        case SweepColumn::rec_err: return r.rec_err;
        case SweepColumn::extra: return r.extra;
    }
    return 0.0;
}

PowerFit fit_exponent(const std::vector<SweepRecord>& records, SweepColumn x, SweepColumn y) {
    std::vector<double> xs, ys;
    for (const SweepRecord& r : records) {
        xs.push_back(column(r, x));
        ys.push_back(column(r, y));
    }
    return fit_power_law(xs, ys);
}

std::vector<SweepRecord> noise_sweep(const Conductivity& sigma_star, const Conductivity& sigma_init,
                                     const ScalarField& boundary, double p,
                                     const std::vector<double>& levels, const InversionOptions& opts,
                                     int workers) {
    const ScalarField clean = forward_map(sigma_star, boundary, p, opts.forward);
    std::vector<SweepRecord> out(levels.size());
    parallel_for(static_cast<int>(levels.size()), workers, [&](int k) {
        const double level = levels[static_cast<std::size_t>(k)];
        const ScalarField noise = make_noise(clean, level, opts.noise_seed + static_cast<std::uint64_t>(k));
        const ScalarField data = clean + noise;
        InversionOptions local = opts;
        local.cg_tol = 1.5 * l2_norm(noise) / l2_norm(data);
        const Reconstruction rec =
            gauss_newton_reconstruct(sigma_init, boundary, p, data, local, &sigma_star.field());
        const ScalarField f_hat = forward_map(Conductivity(rec.sigma), boundary, p, opts.forward);
        SweepRecord r;
        r.label = "noise";
        r.eps = level;
        r.l2_h = l2_norm(f_hat - clean);
        r.rec_err = l2_norm(rec.sigma - sigma_star.field());
        r.extra = static_cast<double>(rec.log.size() - 1);
        out[static_cast<std::size_t>(k)] = r;
    });
    return out;
}

}  // namespace hip
