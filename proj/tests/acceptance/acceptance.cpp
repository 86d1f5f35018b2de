// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "hip/errors.hpp"
#include "hip/factorization.hpp"
#include "hip/forward.hpp"
#include "hip/inversion.hpp"
#include "hip/presets.hpp"
#include "hip/stability.hpp"

using namespace hip;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. elliptic solver

double mms_u(double x, double y) { return std::sin(pi * x) * std::sin(pi * y) + x * y; }

double mms_rhs(double x, double y) {
    const double s = 1.0 + 0.5 * x * y;
    const double ux = pi * std::cos(pi * x) * std::sin(pi * y) + y;
    const double uy = pi * std::sin(pi * x) * std::cos(pi * y) + x;
    const double lap = -2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y);
    return s * lap + 0.5 * y * ux + 0.5 * x * uy;
}

Outcome solver() {
    double e[2];
    for (int k = 0; k < 2; ++k) {
        const Grid g(64 << k);
        const Conductivity s(ScalarField::from_function(g, [](double x, double y) { return 1.0 + 0.5 * x * y; }));
        const ScalarField exact = ScalarField::from_function(g, mms_u);
        e[k] = l2_norm(solve_dirichlet(assemble(s), exact, ScalarField::from_function(g, mms_rhs)) - exact);
    }
    const double order = std::log2(e[0] / e[1]);
    const Grid g(128);
    const ScalarField f = presets::linear_x(g);
    const double lin = (solve_potential(presets::constant_sigma(g, 1.0), f) - f).max_abs();
    return {std::abs(order - 2.0) <= 0.1 && lin <= 1e-8, fmt("order=%.4f linear_max_err=%.2e", order, lin)};
}

// ---------------------------------------------------------------------------
// 2, 3. Taylor slopes

struct Slopes {
    double rem_lo = INFINITY, rem_hi = -INFINITY;
    double dir_lo = INFINITY, dir_hi = -INFINITY;
    double third_lo = INFINITY, third_hi = -INFINITY;
};

const Slopes& taylor_slopes() {
    static const Slopes result = [] {
        Slopes s;
        const std::vector<double> eps{1e-1, 3e-2, 1e-2};
        const Grid g(32);
        const Conductivity s0 = presets::bump_sigma(g);
        const ScalarField f = presets::linear_x(g);
        for (double p : {0.5, 1.0}) {
            const LinearizationBundle b(s0, f, p);
            const ScalarField f0 = b.forward_value();
            for (std::uint64_t k = 0; k < 5; ++k) {
                const ScalarField h = presets::random_bump(g, 1 + k);
                const ScalarField d1 = differential(b, h);
                const ScalarField d2 = second_differential(b, h);
                std::vector<double> r1, r2, r3;
                for (double e : eps) {
                    const ScalarField fe = forward_map(Conductivity(s0.field() + e * h), f, p);
                    r1.push_back(l2_norm(fe - f0));
                    r2.push_back(l2_norm(fe - f0 - e * d1));
                    r3.push_back(l2_norm(fe - f0 - e * d1 - (0.5 * e * e) * d2));
                }
                const double a = fit_power_law(eps, r2).slope;
                const double d = fit_power_law(eps, r1).slope;
                const double t = fit_power_law(eps, r3).slope;
                s.rem_lo = std::min(s.rem_lo, a), s.rem_hi = std::max(s.rem_hi, a);
                s.dir_lo = std::min(s.dir_lo, d), s.dir_hi = std::max(s.dir_hi, d);
                s.third_lo = std::min(s.third_lo, t), s.third_hi = std::max(s.third_hi, t);
            }
        }
        return s;
    }();
    return result;
}

Outcome linearization() {
    const Slopes& s = taylor_slopes();
    const bool ok = s.rem_lo >= 1.9 && s.rem_hi <= 2.1 && s.dir_lo >= 0.9 && s.dir_hi <= 1.1;
    return {ok, fmt("remainder_slope=[%.4f,%.4f] directional_slope=[%.4f,%.4f]", s.rem_lo, s.rem_hi,
                    s.dir_lo, s.dir_hi)};
}

Outcome third_order_taylor() {
    const Slopes& s = taylor_slopes();
    return {s.third_lo >= 2.7 && s.third_hi <= 3.3, fmt("third_order_slope=[%.4f,%.4f]", s.third_lo, s.third_hi)};
}

// ---------------------------------------------------------------------------
// 4. factorization

Outcome factorization() {
    const int levels[3] = {32, 64, 128};
    double worst_ratio = INFINITY, worst_fine = 0.0;
    for (double p : {0.5, 1.0}) {
        double r[3][10];
        for (int l = 0; l < 3; ++l) {
            const Grid g(levels[l]);
            const LinearizationBundle b(presets::bump_sigma(g), presets::linear_x(g), p);
            for (int k = 0; k < 10; ++k)
                r[l][k] = factorization_residual(b, presets::random_bump(g, 300 + static_cast<std::uint64_t>(k)));
        }
        for (int k = 0; k < 10; ++k) {
            worst_ratio = std::min({worst_ratio, r[0][k] / r[1][k], r[1][k] / r[2][k]});
            worst_fine = std::max(worst_fine, r[2][k]);
        }
    }
    return {worst_ratio >= 1.5 && worst_fine <= 5e-2,
            fmt("min_ratio_per_doubling=%.3f max_residual_n128=%.3e", worst_ratio, worst_fine)};
}

// ---------------------------------------------------------------------------
// 5. example stencil

Outcome example_stencil() {
    double worst = 0.0;
    bool pattern = true;
    for (int n : {16, 32}) {
        const Grid g(n);
        const int m = n - 1;
        for (double p : {0.25, 0.5, 1.0}) {
            const ProjectedGradientOperator op =
                assemble_L(presets::constant_sigma(g, 1.0), presets::linear_x(g), p);
            // Independent 5-point matrix of -(d_yy + (1-p) d_xx), coefficients times h^2.
            std::vector<Eigen::Triplet<double>> t;
            for (int j = 1; j < n; ++j)
                for (int i = 1; i < n; ++i) {
                    const auto r = static_cast<int>(g.interior_index(i, j));
                    t.emplace_back(r, r, 2.0 + 2.0 * (1.0 - p));
                    if (i > 1) t.emplace_back(r, r - 1, -(1.0 - p));
                    if (i < m) t.emplace_back(r, r + 1, -(1.0 - p));
                    if (j > 1) t.emplace_back(r, r - m, -1.0);
                    if (j < m) t.emplace_back(r, r + m, -1.0);
                }
            linalg::SparseMatrix ref(m * m, m * m);
            ref.setFromTriplets(t.begin(), t.end());
            ref.prune(0.0);
            linalg::SparseMatrix got = (g.h() * g.h()) * op.matrix();
            const linalg::SparseMatrix diff = got - ref;
            for (int c = 0; c < diff.outerSize(); ++c)
                for (linalg::SparseMatrix::InnerIterator it(diff, c); it; ++it)
                    worst = std::max(worst, std::abs(it.value()));
            got.prune([](auto, auto, double v) { return v != 0.0; });
            pattern = pattern && got.nonZeros() == ref.nonZeros();
        }
    }
    return {worst <= 1e-12 && pattern, fmt("max_entry_diff=%.2e same_pattern=%d", worst, pattern ? 1 : 0)};
}

// ---------------------------------------------------------------------------
// 6. spectral bound of L

Outcome l_bound() {
    const Grid g(128);
    const double r1 = l_spectral_bound(presets::constant_sigma(g, 1.0), presets::linear_x(g), 1.0) / (pi * pi);
    const double rh =
        l_spectral_bound(presets::constant_sigma(g, 1.0), presets::linear_x(g), 0.5) / (1.5 * pi * pi);
    double spread = 0.0;
    std::string bump;
    for (double p : {1.0, 0.5}) {
        std::vector<double> v;
        for (int n : {32, 64, 128}) {
            const Grid gn(n);
            const Conductivity s = presets::bump_sigma(gn);
            v.push_back(l_spectral_bound(s, solve_potential(s, presets::linear_x(gn)), p));
        }
        for (double x : v) spread = std::max(spread, std::abs(x / v.back() - 1.0));
        bump += fmt(" bump_p%.1f=[%.4g,%.4g,%.4g]", p, v[0], v[1], v[2]);
    }
    return {std::abs(r1 - 1.0) <= 0.02 && std::abs(rh - 1.0) <= 0.02 && spread <= 0.2,
            fmt("p1/pi^2=%.5f p0.5/(1.5pi^2)=%.5f refinement_spread=%.3f", r1, rh, spread) + bump};
}

// ---------------------------------------------------------------------------
// 7. transport

Outcome transport() {
    const Grid g(128);
    const ScalarField u = presets::linear_x(g);
    const double t1 = transport_spectral_bound(u);
    const double t2 = transport_spectral_bound(2.0 * u);
    return {std::abs(t1 / pi - 1.0) <= 0.05 && t2 == 2.0 * t1, fmt("sigma_min/pi=%.5f scaled_ratio=%.17g", t1 / pi, t2 / t1)};
}

// ---------------------------------------------------------------------------
// 8. adjoint

Outcome adjoint() {
    const Grid g(32);
    const Conductivity presets_[3] = {presets::constant_sigma(g, 1.0), presets::bump_sigma(g),
                                      presets::expx_sigma(g)};
    double worst = 0.0;
    for (const Conductivity& s : presets_)
        for (double p : {0.5, 1.0}) {
            const LinearizationBundle b(s, presets::linear_x(g), p);
            for (std::uint64_t k = 0; k < 20; ++k) {
                const ScalarField h = presets::random_sine_series(g, 6, 500 + k);
                const ScalarField gg = presets::random_bump(g, 700 + k) + presets::gaussian(g, 0.3, 0.1, 0.9, 0.1);
                const double lhs = l2_inner(differential(b, h), gg);
                const double rhs = l2_inner(h, apply_dF_adjoint(b, gg));
                worst = std::max(worst, std::abs(lhs - rhs) / (l2_norm(h) * l2_norm(gg)));
            }
        }
    return {worst <= 1e-8, fmt("max_rel_mismatch=%.2e", worst)};
}

// ---------------------------------------------------------------------------
// 9. reconstruction

Outcome reconstruction() {
    std::string detail;
    bool ok = true;
    {
        const Grid g(64);
        const Conductivity truth = presets::bump_sigma(g);
        const ScalarField f = presets::linear_x(g);
        InversionOptions o;
        o.reg_lambda = 1e-8;
        o.cg_tol = 1e-4;
        for (double p : {0.5, 1.0}) {
            const Reconstruction r = gauss_newton_reconstruct(presets::constant_sigma(g, 1.0), f, p,
                                                              forward_map(truth, f, p), o, &truth.field());
            const double err = l2_norm(r.sigma - truth.field()) / l2_norm(truth.field());
            const auto steps = r.log.size() - 1;
            ok = ok && err <= 0.02 && steps <= 20;
            detail += fmt("n64_p%.1f_err=%.2e steps=%zu ", p, err, steps);
        }
    }
    {
        // The initial guess carries the target's boundary values; updates vanish there.
        const Grid g(32);
        const Conductivity truth = presets::bump_sigma(g);
        ScalarField init(g, 1.0);
        for (int j = 0; j <= g.n(); ++j)
            for (int i = 0; i <= g.n(); ++i)
                if (g.on_boundary(i, j)) init(i, j) = truth.field()(i, j);
        InversionOptions o;
        o.reg_lambda = 1e-8;
        const int workers = static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 3u));
        for (double p : {0.5, 1.0}) {
            const auto rows = noise_sweep(truth, Conductivity(init), presets::linear_x(g), p,
                                          {1e-4, 1e-3, 1e-2}, o, workers);
            const double slope = fit_exponent(rows, SweepColumn::l2_h, SweepColumn::rec_err).slope;
            ok = ok && slope >= 0.5;
            detail += fmt("sweep_p%.1f_slope=%.3f ", p, slope);
        }
    }
    detail.pop_back();
    return {ok, detail};
}

// ---------------------------------------------------------------------------
// 10. exponent plan

Outcome plan() {
    const ExponentPlan pl = plan_exponents(0.5, 1.0, 2, 0.5);
    const auto checks = validate_plan(pl);
    const bool equality = std::any_of(checks.begin(), checks.end(), [](const PlanCheck& c) { return c.equality; });
    bool lipschitz = true;
    for (double mu : {0.1, 0.25, 0.5, 0.9}) lipschitz = lipschitz && std::abs(beta_of(mu, 1.0) - 1.0) <= 1e-15;
    const bool ok = pl.mu == 0.25 && pl.beta == 0.75 && std::abs(pl.mu3 - 8.0 / 9.0) <= 1e-15 && pl.s1 == 6.0 &&
                    pl.s == 54.0 && lipschitz && plan_valid(checks) && equality && !pl.warnings.empty();
    return {ok, fmt("mu=%.17g beta=%.17g mu3=%.17g s1=%.17g s=%.17g equality_flag=%d", pl.mu, pl.beta, pl.mu3,
                    pl.s1, pl.s, equality ? 1 : 0)};
}

// ---------------------------------------------------------------------------
// 11. linear stability sweep

Outcome stability_sweep() {
    const Grid g(32);
    const LinearizationBundle b(presets::bump_sigma(g), presets::linear_x(g), 1.0);
    const ExponentPlan pl = plan_exponents(0.5, 1.0);
    StabilitySweepOptions o;
    o.workers = 3;
    o.band = 4;
    const StabilitySweep lo = linear_stability_sweep(b, pl.alpha1, pl.s1, o);
    o.band = 16;
    const StabilitySweep hi = linear_stability_sweep(b, pl.alpha1, pl.s1, o);
    o.amplitude = 3.0;
    const StabilitySweep hi3 = linear_stability_sweep(b, pl.alpha1, pl.s1, o);
    double homog = 0.0;
    for (std::size_t k = 0; k < hi.records.size(); ++k)
        homog = std::max(homog, std::abs(hi3.records[k].rec_err / hi.records[k].rec_err - 1.0));
    const double growth = hi.c_star / lo.c_star;
    const bool ok = std::isfinite(lo.c_star) && std::isfinite(hi.c_star) && homog <= 1e-10 && growth <= 3.0;
    return {ok, fmt("C*_band4=%.4e C*_band16=%.4e growth=%.3f homogeneity_err=%.2e", lo.c_star, hi.c_star,
                    growth, homog)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"elliptic solver", solver},
        {"linearization remainder", linearization},
        {"second differential", third_order_taylor},
        {"factorization residual", factorization},
        {"example stencil", example_stencil},
        {"spectral bound of L", l_bound},
        {"transport bound", transport},
        {"adjoint identity", adjoint},
        {"reconstruction", reconstruction},
        {"exponent plan", plan},
        {"linear stability sweep", stability_sweep},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2zu %-24s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
