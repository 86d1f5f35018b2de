#pragma once

// Flat key=value experiment configuration with '#' comments.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hip/elliptic.hpp"
#include "hip/errors.hpp"
#include "hip/inversion.hpp"

namespace hip::cli {

/// Malformed or out-of-range configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// "constant c" | "bump [a x0 y0 r]" | "expx" | "file <path>"
struct SigmaSpec {
    enum class Kind { constant, bump, expx, file } kind = Kind::constant;
    double c = 1.0;
    double a = 0.2, x0 = 0.5, y0 = 0.5, r = 0.05;
    std::filesystem::path path;

    /// Throws DomainError if a file field is unreadable or not positive.
    Conductivity build(const Grid& grid) const;
    std::string describe() const;
};

/// "linear-x" | "affine a b"
struct BoundarySpec {
    double a = 1.0;
    double b = 0.0;

    ScalarField build(const Grid& grid) const;
    std::string describe() const;
};

inline SigmaSpec bump_target() {
    SigmaSpec s;
    s.kind = SigmaSpec::Kind::bump;
    return s;
}

struct ExperimentConfig {
    int n = 32;
    double p = 1.0;
    SigmaSpec sigma{};
    BoundarySpec boundary{};
    SolverOptions solver{};
    double grad_floor = 1e-3;
    InversionOptions inversion{};
    double noise_level = 0.0;
    std::uint64_t seed = 1;
    std::vector<double> sweep_eps{1e-1, 3e-2, 1e-2};
    std::vector<double> sweep_noise{1e-4, 1e-3, 1e-2};
    int sweep_samples = 16;
    std::vector<int> sweep_band{4, 16};
    int sweep_workers = 1;
    double plan_theta = 0.5;
    double plan_alpha1 = 0.5;
    SigmaSpec target = bump_target();
    SigmaSpec init{};
    bool init_keeps_target_trace = true;  ///< copy the target's boundary values into the initial guess
    std::filesystem::path out = ".";

    ForwardOptions forward_options() const { return {grad_floor, solver}; }
    /// Inversion options with the forward options and seed folded in.
    InversionOptions inversion_options() const;
};

/// Parses config text. Throws ConfigError naming the line on any problem.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace hip::cli
