#pragma once

// Exponent arithmetic of the abstract Holder-stability theorem, and the
// empirical sweep of ||h|| against ||dF(h)||_{H^1}^a1 ||h||_{H^s1}^(1-a1).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hip/forward.hpp"
#include "hip/inversion.hpp"

namespace hip {

struct ExponentPlan {
    int n = 2;            ///< spatial dimension
    double p = 1.0;
    double alpha = 2.0;   ///< order of the linearization remainder
    double alpha1 = 0.5;
    double mu1 = 0.5;
    double mu2 = 1.0;
    double mu3 = 0.0;
    double mu = 0.0;      ///< alpha1 mu1 mu2
    double beta = 0.0;
    double theta = 0.5;
    double s = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;      ///< only meaningful when mu2 < 1; 0 means not supplied
    std::vector<std::string> warnings;
};

/// mu / (1 - mu3 (1 - mu)). Throws DomainError outside mu in (0,1), mu3 in [0,1].
double beta_of(double mu, double mu3);

/// max{0, (1 - alpha mu) / (1 - mu)}.
double mu3_lower_bound(double alpha, double mu);

/// beta = (1 + max(theta, 1/2)) / 2 and mu3 = (beta - mu) / (beta (1 - mu)).
/// p = 1: mu1 = alpha1, alpha1 shrinks from alpha1_start until
/// mu = alpha1^2 < min(1/2, beta); s1 = (n+4) / (2 (1 - alpha1)).
/// p < 1: alpha1 = 1, mu1 shrinks from alpha1_start instead and
/// s1 = (n+4) / (2 (1 - mu1)). Always s = s1 / (1 - mu3).
/// Throws DomainError for theta outside (0,1), p outside (0,1],
/// alpha1_start outside (0,1] or n < 1.
ExponentPlan plan_exponents(double theta, double p, int n = 2, double alpha1_start = 0.5);

struct PlanCheck {
    std::string name;
    bool applicable = true;
    bool satisfied = true;
    double lhs = 0.0;
    double rhs = 0.0;
    bool equality = false;  ///< a non-strict inequality holding with equality
};

/// Evaluates every constraint of the plan. Never throws.
std::vector<PlanCheck> validate_plan(const ExponentPlan& plan);
/// True when every applicable check is satisfied.
bool plan_valid(const std::vector<PlanCheck>& checks);

/// key=value lines, doubles in %.17g, one warning= line per warning.
std::string plan_to_text(const ExponentPlan& plan);
/// Inverse of plan_to_text. Throws DomainError on an unknown key or bad value.
ExponentPlan plan_from_text(const std::string& text);

struct StabilitySweepOptions {
    int samples = 16;
    std::uint64_t seed = 1;
    int band = 8;            ///< sine modes per direction
    double amplitude = 1.0;  ///< every sample is multiplied by this
    int workers = 1;
};

struct StabilitySweep {
    std::vector<SweepRecord> records;  ///< eps = sample index, rec_err = ratio, extra = band
    double c_star = 0.0;               ///< largest ratio
};

/// For random sine series h (sample k uses seed + k), records ||h||,
/// ||dF(h)||_{H^1}, ||h||_{H^s1} and ||h|| / (||dF h||^a1 ||h||_{H^s1}^(1-a1)).
/// Throws DomainError for fewer than 10 samples.
StabilitySweep linear_stability_sweep(const LinearizationBundle& bundle, double alpha1, double s1,
                                      const StabilitySweepOptions& opts);

}  // namespace hip
