#include "hip/commands.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include "hip/factorization.hpp"
#include "hip/field_io.hpp"
#include "hip/forward.hpp"
#include "hip/inversion.hpp"
#include "hip/presets.hpp"
#include "hip/stability.hpp"

namespace hip::cli {

namespace {

void print(std::ostream& out, const char* format, ...) {
    char buf[1024];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    out << buf;
}

std::filesystem::path output_dir(const ExperimentConfig& config) {
    std::filesystem::create_directories(config.out);
    return config.out;
}

void write_csv(const std::filesystem::path& path, const std::vector<SweepRecord>& rows) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DomainError("cannot write " + path.string());
    write_sweep_csv(file, rows);
}

Conductivity initial_guess(const ExperimentConfig& config, const Grid& grid,
                           const Conductivity& target) {
    ScalarField init = config.init.build(grid).field();
    if (config.init_keeps_target_trace) {
        for (int j = 0; j <= grid.n(); ++j) {
            for (int i = 0; i <= grid.n(); ++i) {
                if (grid.on_boundary(i, j)) init(i, j) = target.field()(i, j);
            }
        }
    }
    return Conductivity(std::move(init));
}

// ---------------------------------------------------------------------------
// verify

struct Check {
    std::string name;
    std::string criterion;
    std::function<std::pair<bool, double>()> run;
};

struct Slopes {
    double remainder = INFINITY;  // farthest from 2 over the samples
    double directional = INFINITY;
    double third = INFINITY;
};

Slopes taylor_slopes(const ExperimentConfig& c) {
    const Grid grid(c.n);
    const Conductivity s0 = c.sigma.build(grid);
    const ScalarField f = c.boundary.build(grid);
    const LinearizationBundle bundle(s0, f, c.p, c.forward_options());
    const ScalarField f0 = bundle.forward_value();
    Slopes worst;
    auto keep = [](double& slot, double v, double target) {
        if (!std::isfinite(slot) || std::abs(v - target) > std::abs(slot - target)) slot = v;
    };
    for (int k = 0; k < 3; ++k) {
        const ScalarField h = presets::random_bump(grid, c.seed + static_cast<std::uint64_t>(k));
        const ScalarField d1 = differential(bundle, h);
        const ScalarField d2 = second_differential(bundle, h);
        std::vector<double> r2, r1, r3;
        for (double e : c.sweep_eps) {
            const ScalarField fe =
                forward_map(Conductivity(s0.field() + e * h), f, c.p, c.forward_options());
            r1.push_back(l2_norm(fe - f0));
            r2.push_back(l2_norm(fe - f0 - e * d1));
            r3.push_back(l2_norm(fe - f0 - e * d1 - (0.5 * e * e) * d2));
        }
        keep(worst.remainder, fit_power_law(c.sweep_eps, r2).slope, 2.0);
        keep(worst.directional, fit_power_law(c.sweep_eps, r1).slope, 1.0);
        keep(worst.third, fit_power_law(c.sweep_eps, r3).slope, 3.0);
    }
    return worst;
}

std::vector<Check> verify_checks(const ExperimentConfig& c) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    auto slopes = std::make_shared<std::optional<Slopes>>();
    auto get_slopes = [slopes, &c]() -> const Slopes& {
        if (!*slopes) *slopes = taylor_slopes(c);
        return **slopes;
    };
    std::vector<Check> checks;
    checks.push_back({"solver_linear_exact", "max|u - f| <= 1e-8 for sigma = 1", [&c] {
        const Grid grid(c.n);
        const ScalarField f = c.boundary.build(grid);
        const ScalarField u = solve_potential(presets::constant_sigma(grid, 1.0), f, c.solver);
        const double err = (u - f).max_abs();
        return std::pair{err <= 1e-8, err};
    }});
    checks.push_back({"taylor_remainder_slope", "|slope - 2| <= 0.1", [get_slopes] {
        const double s = get_slopes().remainder;
        return std::pair{std::abs(s - 2.0) <= 0.1, s};
    }});
    checks.push_back({"directional_slope", "|slope - 1| <= 0.1", [get_slopes] {
        const double s = get_slopes().directional;
        return std::pair{std::abs(s - 1.0) <= 0.1, s};
    }});
    checks.push_back({"second_differential_slope", "|slope - 3| <= 0.3", [get_slopes] {
        const double s = get_slopes().third;
        return std::pair{std::abs(s - 3.0) <= 0.3, s};
    }});
    checks.push_back({"factorization_decay", "residual ratio n/2 -> n >= 1.5", [&c] {
        const int fine = std::max(c.n, 16);
        double worst = INFINITY;
        for (int k = 0; k < 3; ++k) {
            double r[2];
            for (int level = 0; level < 2; ++level) {
                const Grid grid(level == 0 ? fine / 2 : fine);
                const ScalarField rho =
                    presets::random_bump(grid, c.seed + 100 + static_cast<std::uint64_t>(k));
                r[level] = factorization_residual(c.sigma.build(grid), c.boundary.build(grid), c.p,
                                                  rho, c.forward_options());
            }
            worst = std::min(worst, r[0] / r[1]);
        }
        return std::pair{worst >= 1.5, worst};
    }});
    checks.push_back({"example_stencil", "max|L - 5pt(-(d_yy + (1-p) d_xx))| <= 1e-12", [&c] {
        const Grid grid(c.n);
        const ProjectedGradientOperator op = assemble_L(presets::constant_sigma(grid, 1.0),
                                                        presets::linear_x(grid), c.p, c.grad_floor);
        // Compared as stencil coefficients, i.e. after scaling by h^2.
        const double h2 = grid.h() * grid.h();
        const double diag = 2.0 + 2.0 * (1.0 - c.p);
        double err = 0.0;
        const linalg::SparseMatrix& m = op.matrix();
        const int side = c.n - 1;
        for (int col = 0; col < m.outerSize(); ++col) {
            for (linalg::SparseMatrix::InnerIterator it(m, col); it; ++it) {
                const auto r = static_cast<int>(it.row());
                double expect = 0.0;
                if (r == col) expect = diag;
                else if (std::abs(r - col) == side) expect = -1.0;
                else if (std::abs(r - col) == 1 && std::min(r, col) % side != side - 1) {
                    expect = -(1.0 - c.p);
                }
                err = std::max(err, std::abs(h2 * it.value() - expect));
            }
        }
        // Every expected nonzero must also be present.
        const auto expected_nnz =
            static_cast<long>(side) * side + 2L * side * (side - 1) * (c.p < 1.0 ? 2 : 1);
        long nnz = 0;
        for (int col = 0; col < m.outerSize(); ++col) {
            for (linalg::SparseMatrix::InnerIterator it(m, col); it; ++it) {
                if (it.value() != 0.0) ++nnz;
            }
        }
        return std::pair{err <= 1e-12 && nnz == expected_nnz, err};
    }});
    checks.push_back({"l_spectral_bound", "within 2% of (2-p) pi^2 at sigma = 1, u = x", [&c, pi2] {
        const Grid grid(c.n);
        const double v = l_spectral_bound(
            assemble_L(presets::constant_sigma(grid, 1.0), presets::linear_x(grid), c.p, c.grad_floor));
        const double ratio = v / ((2.0 - c.p) * pi2);
        return std::pair{std::abs(ratio - 1.0) <= 0.02, ratio};
    }});
    checks.push_back({"transport_bound", "within 5% of pi at u = x, doubles exactly with u", [&c] {
        const Grid grid(c.n);
        const ScalarField u = presets::linear_x(grid);
        const double t1 = transport_spectral_bound(u, c.grad_floor);
        const double t2 = transport_spectral_bound(2.0 * u, c.grad_floor);
        const double ratio = t1 / std::numbers::pi;
        return std::pair{std::abs(ratio - 1.0) <= 0.05 && t2 == 2.0 * t1, ratio};
    }});
    checks.push_back({"adjoint_identity", "|<dF h,g> - <h,dF* g>| <= 1e-8 ||h|| ||g||", [&c] {
        const Grid grid(c.n);
        const LinearizationBundle bundle(c.sigma.build(grid), c.boundary.build(grid), c.p,
                                         c.forward_options());
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const auto seed = c.seed + 200 + static_cast<std::uint64_t>(k);
            const ScalarField h = presets::random_sine_series(grid, 6, seed);
            const ScalarField g = presets::random_bump(grid, seed + 1000) +
                                  presets::gaussian(grid, 0.3, 0.1, 0.9, 0.1);
            const double lhs = l2_inner(differential(bundle, h), g);
            const double rhs = l2_inner(h, apply_dF_adjoint(bundle, g));
            worst = std::max(worst, std::abs(lhs - rhs) / (l2_norm(h) * l2_norm(g)));
        }
        return std::pair{worst <= 1e-8, worst};
    }});
    checks.push_back({"exponent_plan", "plan_exponents(theta, p) passes validate_plan", [&c] {
        const ExponentPlan plan = plan_exponents(c.plan_theta, c.p, 2, c.plan_alpha1);
        return std::pair{plan_valid(validate_plan(plan)), plan.s};
    }});
    return checks;
}

}  // namespace

std::string error_name(const std::exception& e) {
    if (dynamic_cast<const GradientFloorViolated*>(&e)) return "GradientFloorViolated";
    if (dynamic_cast<const GridMismatch*>(&e)) return "GridMismatch";
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const SolverError*>(&e)) return "SolverError";
    if (dynamic_cast<const DivergenceError*>(&e)) return "DivergenceError";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    return "exception";
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const GradientFloorViolated*>(&e)) return exit_gradient_floor;
    if (dynamic_cast<const SolverError*>(&e)) return exit_solver;
    if (dynamic_cast<const DivergenceError*>(&e)) return exit_divergence;
    return exit_config;
}

int cmd_forward(const ExperimentConfig& c, std::ostream& out) {
    const Grid grid(c.n);
    const Conductivity sigma = c.sigma.build(grid);
    const LinearizationBundle bundle(sigma, c.boundary.build(grid), c.p, c.forward_options());
    const ScalarField f = bundle.forward_value();
    const auto dir = output_dir(c);
    save_field(dir / "u.hipfield", bundle.u0());
    save_field(dir / "F.hipfield", f);
    print(out, "forward n=%d p=%.17g sigma=%s boundary=%s\n", c.n, c.p, c.sigma.describe().c_str(),
          c.boundary.describe().c_str());
    print(out, "min|grad u|=%.6g max|grad u|=%.6g ||u||=%.6g ||F||=%.6g ||F||_H1=%.6g\n",
          bundle.grad_norm().min(), bundle.grad_norm().max(), l2_norm(bundle.u0()), l2_norm(f),
          h1_norm(f));
    return exit_ok;
}

int cmd_verify(const ExperimentConfig& c, std::ostream& out) {
    print(out, "verify n=%d p=%.17g sigma=%s boundary=%s seed=%llu\n", c.n, c.p,
          c.sigma.describe().c_str(), c.boundary.describe().c_str(),
          static_cast<unsigned long long>(c.seed));
    std::vector<std::string> failed;
    const std::vector<Check> checks = verify_checks(c);
    for (const Check& check : checks) {
        bool ok = false;
        std::string detail;
        try {
            const auto [pass, value] = check.run();
            ok = pass;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6e", value);
            detail = buf;
        } catch (const std::exception& e) {
            detail = error_name(e) + ": " + e.what();
        }
        if (!ok) failed.push_back(check.name);
        print(out, "%-26s %-4s %-14s %s\n", check.name.c_str(), ok ? "PASS" : "FAIL", detail.c_str(),
              check.criterion.c_str());
    }
    print(out, "%zu/%zu checks passed\n", checks.size() - failed.size(), checks.size());
    if (failed.empty()) return exit_ok;
    std::string names;
    for (const std::string& f : failed) names += (names.empty() ? "" : ", ") + f;
    print(out, "failed: %s\n", names.c_str());
    return exit_verify_failed;
}

int cmd_reconstruct(const ExperimentConfig& c, std::ostream& out) {
    const Grid grid(c.n);
    const Conductivity target = c.target.build(grid);
    const Conductivity init = initial_guess(c, grid, target);
    const ScalarField f = c.boundary.build(grid);
    const ScalarField clean = forward_map(target, f, c.p, c.forward_options());
    const ScalarField data = clean + make_noise(clean, c.noise_level, c.seed);
    const Reconstruction rec =
        gauss_newton_reconstruct(init, f, c.p, data, c.inversion_options(), &target.field());

    std::vector<SweepRecord> rows;
    for (const IterateRecord& r : rec.log) {
        SweepRecord row;
        row.label = "iterate";
        row.eps = r.iteration;
        row.l2_h = r.misfit;
        row.rec_err = r.error;
        row.extra = r.step;
        rows.push_back(row);
    }
    const auto dir = output_dir(c);
    save_field(dir / "sigma_hat.hipfield", rec.sigma);
    write_csv(dir / "reconstruct.csv", rows);
    const IterateRecord& last = rec.log.back();
    print(out, "reconstruct n=%d p=%.17g target=%s noise=%.3g\n", c.n, c.p,
          c.target.describe().c_str(), c.noise_level);
    print(out, "steps=%zu misfit=%.6e rel_misfit=%.6e rel_error=%.6e status=%s\n",
          rec.log.size() - 1, last.misfit, last.rel_misfit, last.error,
          rec.converged ? "converged" : rec.stagnated ? "stagnated" : "max_iters");
    return exit_ok;
}

int cmd_sweep_linear(const ExperimentConfig& c, std::ostream& out) {
    const Grid grid(c.n);
    const LinearizationBundle bundle(c.sigma.build(grid), c.boundary.build(grid), c.p,
                                     c.forward_options());
    const ExponentPlan plan = plan_exponents(c.plan_theta, c.p, 2, c.plan_alpha1);
    print(out, "sweep-linear n=%d p=%.17g alpha1=%.17g s1=%.17g samples=%d\n", c.n, c.p, plan.alpha1,
          plan.s1, c.sweep_samples);
    std::vector<SweepRecord> rows;
    double first = 0.0;
    double last = 0.0;
    for (std::size_t b = 0; b < c.sweep_band.size(); ++b) {
        StabilitySweepOptions so;
        so.samples = c.sweep_samples;
        so.seed = c.seed;
        so.band = c.sweep_band[b];
        so.workers = c.sweep_workers;
        const StabilitySweep sweep = linear_stability_sweep(bundle, plan.alpha1, plan.s1, so);
        rows.insert(rows.end(), sweep.records.begin(), sweep.records.end());
        print(out, "band=%d C*=%.6e\n", so.band, sweep.c_star);
        if (b == 0) first = sweep.c_star;
        last = sweep.c_star;
    }
    write_csv(output_dir(c) / "sweep_linear.csv", rows);
    print(out, "growth=%.6e\n", last / first);
    return exit_ok;
}

int cmd_sweep_nonlinear(const ExperimentConfig& c, std::ostream& out) {
    const Grid grid(c.n);
    const Conductivity target = c.target.build(grid);
    const Conductivity init = initial_guess(c, grid, target);
    const std::vector<SweepRecord> rows = noise_sweep(target, init, c.boundary.build(grid), c.p,
                                                      c.sweep_noise, c.inversion_options(),
                                                      c.sweep_workers);
    write_csv(output_dir(c) / "sweep_nonlinear.csv", rows);
    print(out, "sweep-nonlinear n=%d p=%.17g target=%s\n", c.n, c.p, c.target.describe().c_str());
    for (const SweepRecord& r : rows) {
        print(out, "noise=%.3g misfit=%.6e error=%.6e steps=%g\n", r.eps, r.l2_h, r.rec_err, r.extra);
    }
    if (rows.size() >= 3) {
        const PowerFit fit = fit_exponent(rows, SweepColumn::l2_h, SweepColumn::rec_err);
        print(out, "slope=%.6f r2=%.6f\n", fit.slope, fit.r2);
    }
    return exit_ok;
}

int cmd_plan(const ExperimentConfig& c, std::ostream& out) {
    const ExponentPlan plan = plan_exponents(c.plan_theta, c.p, 2, c.plan_alpha1);
    const std::string text = plan_to_text(plan);
    {
        std::ofstream file(output_dir(c) / "plan.txt", std::ios::binary);
        if (!file) throw DomainError("cannot write plan.txt");
        file << text;
    }
    out << text;
    for (const PlanCheck& check : validate_plan(plan)) {
        const char* status = !check.applicable ? "n/a" : check.satisfied ? "ok" : "violated";
        print(out, "check %-34s %-8s lhs=%.17g rhs=%.17g%s\n", check.name.c_str(), status, check.lhs,
              check.rhs, check.equality ? " (equality)" : "");
    }
    return exit_ok;
}

int run_command(const std::string& name, const ExperimentConfig& config, std::ostream& out,
                std::ostream& err) {
    try {
        if (name == "forward") return cmd_forward(config, out);
        if (name == "verify") return cmd_verify(config, out);
        if (name == "reconstruct") return cmd_reconstruct(config, out);
        if (name == "sweep-linear") return cmd_sweep_linear(config, out);
        if (name == "sweep-nonlinear") return cmd_sweep_nonlinear(config, out);
        if (name == "plan") return cmd_plan(config, out);
        err << "unknown command '" << name << "'\n";
        return exit_config;
    } catch (const std::exception& e) {
        err << error_name(e) << ": " << e.what() << '\n';
        return exit_code_for(e);
    }
}

}  // namespace hip::cli
