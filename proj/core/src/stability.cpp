#include "hip/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hip/errors.hpp"
#include "hip/parallel.hpp"
#include "hip/presets.hpp"

namespace hip {

namespace {

constexpr double tight = 1e-12;

bool close(double a, double b) { return std::abs(a - b) <= tight * std::max(1.0, std::abs(b)); }

}  // namespace

double beta_of(double mu, double mu3) {
    if (!(mu > 0.0 && mu < 1.0)) throw DomainError("beta_of: mu must lie in (0,1)");
    if (!(mu3 >= 0.0 && mu3 <= 1.0)) throw DomainError("beta_of: mu3 must lie in [0,1]");
    const double denom = 1.0 - mu3 * (1.0 - mu);
    if (!(denom > 0.0)) throw DomainError("beta_of: nonpositive denominator");
    return mu / denom;
}

double mu3_lower_bound(double alpha, double mu) {
    return std::max(0.0, (1.0 - alpha * mu) / (1.0 - mu));
}

ExponentPlan plan_exponents(double theta, double p, int n, double alpha1_start) {
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
    validate_exponent(p);
    if (!(alpha1_start > 0.0 && alpha1_start <= 1.0)) throw DomainError("alpha1 must lie in (0,1]");
    if (n < 1) throw DomainError("dimension must be >= 1");

    ExponentPlan plan;
    plan.n = n;
    plan.p = p;
    plan.theta = theta;
    plan.mu2 = 1.0;
    plan.beta = (1.0 + std::max(theta, 0.5)) / 2.0;
    const double cap = std::min(0.5, plan.beta);

    // Shrink the free exponent a by 10% steps until mu < min(1/2, beta).
    double a = alpha1_start;
    auto mu_of = [&](double x) { return p == 1.0 ? x * x : x; };
    int tries = 0;
    while (!(mu_of(a) < cap)) {
        a *= 0.9;
        if (++tries > 1000) throw DomainError("no admissible alpha1 found");
    }
    if (p == 1.0) {
        plan.alpha1 = a;
        plan.mu1 = a;
        plan.s1 = (n + 4) / (2.0 * (1.0 - plan.alpha1));
    } else {
        plan.alpha1 = 1.0;
        plan.mu1 = a;
        plan.s1 = (n + 4) / (2.0 * (1.0 - plan.mu1));
    }
    plan.mu = plan.alpha1 * plan.mu1 * plan.mu2;
    plan.mu3 = (plan.beta - plan.mu) / (plan.beta * (1.0 - plan.mu));
    // 1 - mu3 = mu (1 - beta) / (beta (1 - mu)), written without the cancellation.
    plan.s = plan.s1 * plan.beta * (1.0 - plan.mu) / (plan.mu * (1.0 - plan.beta));

    const double lhs = (1.0 - plan.mu1) * plan.s1;
    const double rhs = n / 2.0 + 2.0;
    if (close(lhs, rhs)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "(1-mu1)*s1 = %.17g equals n/2+2; the strict inequality holds only with equality",
                      lhs);
        plan.warnings.emplace_back(buf);
    }
    return plan;
}

std::vector<PlanCheck> validate_plan(const ExponentPlan& pl) {
    std::vector<PlanCheck> out;
    auto add = [&](std::string name, bool ok, double lhs, double rhs, bool eq = false,
                   bool applicable = true) {
        out.push_back({std::move(name), applicable, applicable ? ok : true, lhs, rhs, eq});
    };
    const double half_n = pl.n / 2.0 + 2.0;

    add("0 < mu < 1", pl.mu > 0.0 && pl.mu < 1.0, pl.mu, 1.0);
    add("mu = alpha1*mu1*mu2", close(pl.mu, pl.alpha1 * pl.mu1 * pl.mu2), pl.mu,
        pl.alpha1 * pl.mu1 * pl.mu2);
    add("mu3 <= 1", pl.mu3 <= 1.0, pl.mu3, 1.0);
    const double lower = (pl.mu < 1.0) ? mu3_lower_bound(pl.alpha, pl.mu) : INFINITY;
    add("mu3 >= max(0,(1-alpha*mu)/(1-mu))", pl.mu3 >= lower, pl.mu3, lower);

    double beta_formula = NAN;
    try {
        beta_formula = beta_of(pl.mu, pl.mu3);
    } catch (const DomainError&) {
    }
    add("beta = mu/(1-mu3*(1-mu))", std::abs(pl.beta - beta_formula) <= tight, pl.beta, beta_formula);
    add("beta > max(theta,1/2)", pl.beta > std::max(pl.theta, 0.5), pl.beta, std::max(pl.theta, 0.5));
    add("beta < 1", pl.beta < 1.0, pl.beta, 1.0);
    add("mu < min(1/2,beta)", pl.mu < std::min(0.5, pl.beta), pl.mu, std::min(0.5, pl.beta));

    const double a1 = (1.0 - pl.alpha1) * pl.s1;
    add("(1-alpha1)*s1 >= 2", a1 >= 2.0 || close(a1, 2.0), a1, 2.0, close(a1, 2.0), pl.alpha1 < 1.0);

    const double m1 = (1.0 - pl.mu1) * pl.s1;
    add("(1-mu1)*s1 > n/2+2", m1 > half_n || close(m1, half_n), m1, half_n, close(m1, half_n));

    const double m3 = (1.0 - pl.mu3) * pl.s;
    add("(1-mu3)*s = s1", close(m3, pl.s1), m3, pl.s1);

    const bool has_s2 = pl.mu2 < 1.0 && pl.s2 > 0.0;
    const double m2 = (1.0 - pl.mu2) * pl.s2;
    add("(1-mu2)*s2 = 1", close(m2, 1.0), m2, 1.0, false, has_s2);
    return out;
}

bool plan_valid(const std::vector<PlanCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const PlanCheck& c) { return c.satisfied; });
}

std::string plan_to_text(const ExponentPlan& pl) {
    std::string out;
    char buf[128];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s=%.17g\n", key, v);
        out += buf;
    };
    std::snprintf(buf, sizeof buf, "n=%d\n", pl.n);
    out += buf;
    put("p", pl.p);
    put("alpha", pl.alpha);
    put("alpha1", pl.alpha1);
    put("mu1", pl.mu1);
    put("mu2", pl.mu2);
    put("mu3", pl.mu3);
    put("mu", pl.mu);
    put("beta", pl.beta);
    put("theta", pl.theta);
    put("s", pl.s);
    put("s1", pl.s1);
    put("s2", pl.s2);
    for (const std::string& w : pl.warnings) out += "warning=" + w + "\n";
    return out;
}

ExponentPlan plan_from_text(const std::string& text) {
    ExponentPlan pl;
    pl.warnings.clear();
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("plan: missing '=' in '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "warning") {
            pl.warnings.push_back(value);
            continue;
        }
        double v = 0.0;
        std::size_t used = 0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size()) throw DomainError("plan: bad value for " + key);
        if (key == "n") pl.n = static_cast<int>(v);
        else if (key == "p") pl.p = v;
        else if (key == "alpha") pl.alpha = v;
        else if (key == "alpha1") pl.alpha1 = v;
        else if (key == "mu1") pl.mu1 = v;
        else if (key == "mu2") pl.mu2 = v;
        else if (key == "mu3") pl.mu3 = v;
        else if (key == "mu") pl.mu = v;
        else if (key == "beta") pl.beta = v;
        else if (key == "theta") pl.theta = v;
        else if (key == "s") pl.s = v;
        else if (key == "s1") pl.s1 = v;
        else if (key == "s2") pl.s2 = v;
        else throw DomainError("plan: unknown key " + key);
    }
    return pl;
}

StabilitySweep linear_stability_sweep(const LinearizationBundle& bundle, double alpha1, double s1,
                                      const StabilitySweepOptions& opts) {
    if (opts.samples < 10) throw DomainError("stability sweep needs at least 10 samples");
    if (!(alpha1 > 0.0 && alpha1 <= 1.0)) throw DomainError("alpha1 must lie in (0,1]");
    if (!(s1 >= 0.0)) throw DomainError("s1 must be >= 0");
    StabilitySweep out;
    out.records.resize(static_cast<std::size_t>(opts.samples));
    parallel_for(opts.samples, opts.workers, [&](int k) {
        const ScalarField h =
            opts.amplitude *
            presets::random_sine_series(bundle.grid(), opts.band, opts.seed + static_cast<std::uint64_t>(k));
        SweepRecord r;
        r.label = "sample";
        r.eps = k;
        r.l2_h = l2_norm(h);
        r.h1_dF = h1_norm(differential(bundle, h));
        r.hs1_h = sobolev_norm(h, s1);
        r.rec_err = r.l2_h / (std::pow(r.h1_dF, alpha1) * std::pow(r.hs1_h, 1.0 - alpha1));
        r.extra = opts.band;
        out.records[static_cast<std::size_t>(k)] = r;
    });
    for (const SweepRecord& r : out.records) out.c_star = std::max(out.c_star, r.rec_err);
    return out;
}

}  // namespace hip
