#pragma once

// Linearized and nonlinear reconstruction of sigma from F(sigma), the exact
// discrete adjoint of dF, smooth noise, and power-law fitting of sweeps.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "hip/elliptic.hpp"
#include "hip/forward.hpp"
#include "hip/mesh.hpp"

namespace hip {

struct InversionOptions {
    double reg_lambda = 1e-6;       ///< weight of the H^1 penalty
    int max_outer_iters = 20;       ///< Gauss-Newton steps
    double cg_tol = 1e-3;           ///< Gauss-Newton stops once the relative misfit drops below this
    double damping = 1.0;           ///< step fraction in (0,1]
    double sigma_projection_min = 0.05;
    std::uint64_t noise_seed = 1;
    double inner_tol = 1e-8;        ///< relative residual of the normal-equation CG
    int inner_max_iter = 400;
    double c2_radius = 100.0;       ///< admissible c2_norm(sigma_k - sigma_init)
    double stagnation_tol = 1e-6;   ///< stop once a step lowers the misfit by less than this fraction
    ForwardOptions forward{};

    /// Throws DomainError when a field is out of range.
    void validate() const;
};

/// One row of a sweep table. Unused columns hold 0.
struct SweepRecord {
    std::string label;
    double eps = 0.0;     ///< step size, noise level or sample index
    double l2_h = 0.0;    ///< ||h||, or the reconstruction's data misfit
    double h1_dF = 0.0;   ///< ||dF(h)||_{H^1}
    double hs1_h = 0.0;   ///< ||h||_{H^{s1}}
    double rec_err = 0.0; ///< reconstruction error or stability ratio
    double extra = 0.0;
};

inline constexpr const char* sweep_csv_header = "label,eps,l2_h,h1_dF,hs1_h,rec_err,extra";

/// Header line plus one row per record, doubles in %.17g.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);
/// Throws DomainError on a wrong header or a malformed row.
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

/// Exact transpose of dF in the trapezoidal inner product:
/// <dF(h), g> == <h, dF*(g)> for every h vanishing on the boundary ring.
/// Equals |grad u0|^p g + grad u0 . grad psi up to discretization, with
/// psi = solve_zero_bc(-div(p sigma0 |grad u0|^{p-2} g grad u0)).
ScalarField apply_dF_adjoint(const LinearizationBundle& bundle, const ScalarField& g);

struct LinearInversion {
    ScalarField h;
    std::vector<double> objective;  ///< ||dF(h_k) - d||^2 + lambda ||h_k||_{H^1}^2 per CG step, k >= 0
    int iterations = 0;
    double rel_residual = 0.0;
};

/// Minimizes ||dF(h) - d||^2 + lambda (||h||^2 + ||grad h||^2) over fields
/// vanishing on the ring, by CG on the normal equations. The gradient penalty
/// uses the compact five-point form. Throws SolverError if CG misses inner_tol.
LinearInversion linear_invert(const LinearizationBundle& bundle, const ScalarField& data_perturbation,
                              const InversionOptions& opts);

struct IterateRecord {
    int iteration = 0;
    double misfit = 0.0;      ///< ||data - F(sigma_k)||
    double rel_misfit = 0.0;  ///< misfit / ||data||
    double error = 0.0;       ///< ||sigma_k - truth|| / ||truth||, 0 without a truth
    double step = 0.0;        ///< accepted step fraction
};

struct Reconstruction {
    ScalarField sigma;
    std::vector<IterateRecord> log;  ///< entry 0 is the initial guess
    bool converged = false;          ///< relative misfit reached cg_tol
    bool stagnated = false;          ///< stopped by stagnation_tol
};

/// Damped Gauss-Newton on F(sigma) = data. Updates vanish on the ring, so
/// sigma keeps sigma_init's boundary values; data that no such sigma fits
/// leaves a misfit floor, which ends the run through stagnation_tol. A step
/// that raises the misfit is halved; three halvings without progress throw
/// DivergenceError, as does leaving the C^2 neighbourhood of sigma_init.
/// Gradient-floor violations propagate.
Reconstruction gauss_newton_reconstruct(const Conductivity& sigma_init, const ScalarField& boundary,
                                        double p, const ScalarField& data,
                                        const InversionOptions& opts,
                                        const ScalarField* truth = nullptr);

/// Gaussian nodal noise smoothed by one unit-conductivity solve and scaled so
/// that ||noise||_{H^1} = level ||data||_{H^1}. Deterministic per seed.
ScalarField make_noise(const ScalarField& data, double level, std::uint64_t seed);

struct PowerFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least-squares line through (log x, log y). Throws DomainError on fewer
/// than three points, a size mismatch or a nonpositive entry.
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

enum class SweepColumn { eps, l2_h, h1_dF, hs1_h, rec_err, extra };
double column(const SweepRecord& r, SweepColumn c);
PowerFit fit_exponent(const std::vector<SweepRecord>& records, SweepColumn x, SweepColumn y);

/// Reconstructs sigma_star from noisy data at each level, stopping at 1.5x
/// the realized relative L2 noise. Rows: eps = level,
/// l2_h = ||F(sigma_hat) - F(sigma_star)||, rec_err = ||sigma_hat - sigma_star||,
/// extra = Gauss-Newton steps. Levels run on up to `workers` threads; noise
/// for level k uses opts.noise_seed + k.
std::vector<SweepRecord> noise_sweep(const Conductivity& sigma_star, const Conductivity& sigma_init,
                                     const ScalarField& boundary, double p,
                                     const std::vector<double>& levels, const InversionOptions& opts,
                                     int workers = 1);

}  // namespace hip
