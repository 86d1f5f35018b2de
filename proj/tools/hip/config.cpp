#include "hip/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hip/field_io.hpp"
#include "hip/forward.hpp"
#include "hip/presets.hpp"

namespace hip::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
}

long long to_integer(const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError("not an integer: '" + s + "'");
    return v;
}

int to_int(const std::string& s) {
    const long long v = to_integer(s);
    if (v < -2147483647LL || v > 2147483647LL) throw ConfigError("integer out of range: '" + s + "'");
    return static_cast<int>(v);
}

bool to_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("not a boolean: '" + s + "'");
}

template <class T, class Conv>
std::vector<T> to_list(const std::string& s, Conv conv) {
    std::vector<T> out;
    std::istringstream in(s);
    for (std::string item; std::getline(in, item, ',');) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty list entry in '" + s + "'");
        out.push_back(conv(item));
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

SigmaSpec parse_sigma(const std::string& value) {
    const auto w = words(value);
    if (w.empty()) throw ConfigError("empty sigma preset");
    SigmaSpec s;
    if (w[0] == "constant" && w.size() == 2) {
        s.kind = SigmaSpec::Kind::constant;
        s.c = to_double(w[1]);
        if (!(s.c > 0.0)) throw ConfigError("constant sigma must be > 0");
    } else if (w[0] == "bump" && (w.size() == 1 || w.size() == 5)) {
        s.kind = SigmaSpec::Kind::bump;
        if (w.size() == 5) {
            s.a = to_double(w[1]);
            s.x0 = to_double(w[2]);
            s.y0 = to_double(w[3]);
            s.r = to_double(w[4]);
        }
        if (!(s.r > 0.0)) throw ConfigError("bump width must be > 0");
        if (!(s.a > -1.0)) throw ConfigError("bump amplitude must be > -1");
    } else if (w[0] == "expx" && w.size() == 1) {
        s.kind = SigmaSpec::Kind::expx;
    } else if (w[0] == "file" && w.size() == 2) {
        s.kind = SigmaSpec::Kind::file;
        s.path = w[1];
    } else {
        throw ConfigError("bad sigma preset '" + value +
                          "' (constant c | bump [a x0 y0 r] | expx | file path)");
    }
    return s;
}

BoundarySpec parse_boundary(const std::string& value) {
    const auto w = words(value);
    if (w.size() == 1 && w[0] == "linear-x") return {};
    if (w.size() == 3 && w[0] == "affine") {
        BoundarySpec b{to_double(w[1]), to_double(w[2])};
        if (b.a == 0.0) throw ConfigError("affine boundary needs a != 0");
        return b;
    }
    throw ConfigError("bad boundary preset '" + value + "' (linear-x | affine a b)");
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

Conductivity SigmaSpec::build(const Grid& grid) const {
    switch (kind) {
        case Kind::constant: return presets::constant_sigma(grid, c);
        case Kind::bump: return presets::bump_sigma(grid, a, x0, y0, r);
        case Kind::expx: return presets::expx_sigma(grid);
        case Kind::file: {
            const ScalarField f = load_field(path);
            if (!(f.grid() == grid)) throw GridMismatch();
            return Conductivity(f);
        }
    }
    throw DomainError("unknown sigma preset");
}

std::string SigmaSpec::describe() const {
    switch (kind) {
        case Kind::constant: return "constant " + fmt(c);
        case Kind::bump: return "bump " + fmt(a) + " " + fmt(x0) + " " + fmt(y0) + " " + fmt(r);
        case Kind::expx: return "expx";
        case Kind::file: return "file " + path.string();
    }
    return {};
}

ScalarField BoundarySpec::build(const Grid& grid) const { return presets::affine_x(grid, a, b); }

std::string BoundarySpec::describe() const {
    if (a == 1.0 && b == 0.0) return "linear-x";
    return "affine " + fmt(a) + " " + fmt(b);
}

InversionOptions ExperimentConfig::inversion_options() const {
    InversionOptions o = inversion;
    o.forward = forward_options();
    o.noise_seed = seed;
    return o;
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (value.empty()) throw ConfigError("missing value");
            if (key == "grid.n") c.n = to_int(value);
            else if (key == "p") c.p = to_double(value);
            else if (key == "sigma") c.sigma = parse_sigma(value);
            else if (key == "boundary") c.boundary = parse_boundary(value);
            else if (key == "solver.tol") c.solver.rel_tol = to_double(value);
            else if (key == "solver.max_iter_factor") c.solver.max_iter_factor = to_int(value);
            else if (key == "grad_floor") c.grad_floor = to_double(value);
            else if (key == "inversion.lambda") c.inversion.reg_lambda = to_double(value);
            else if (key == "inversion.max_outer_iters") c.inversion.max_outer_iters = to_int(value);
            else if (key == "inversion.cg_tol") c.inversion.cg_tol = to_double(value);
            else if (key == "inversion.damping") c.inversion.damping = to_double(value);
            else if (key == "inversion.sigma_min") c.inversion.sigma_projection_min = to_double(value);
            else if (key == "inversion.inner_tol") c.inversion.inner_tol = to_double(value);
            else if (key == "inversion.inner_max_iter") c.inversion.inner_max_iter = to_int(value);
            else if (key == "inversion.c2_radius") c.inversion.c2_radius = to_double(value);
            else if (key == "inversion.stagnation_tol") c.inversion.stagnation_tol = to_double(value);
            else if (key == "noise.level") c.noise_level = to_double(value);
            else if (key == "seed") {
                const long long s = to_integer(value);
                if (s < 0) throw ConfigError("seed must be >= 0");
                c.seed = static_cast<std::uint64_t>(s);
            }
            else if (key == "sweep.eps") c.sweep_eps = to_list<double>(value, to_double);
            else if (key == "sweep.noise") c.sweep_noise = to_list<double>(value, to_double);
            else if (key == "sweep.samples") c.sweep_samples = to_int(value);
            else if (key == "sweep.band") c.sweep_band = to_list<int>(value, to_int);
            else if (key == "sweep.workers") c.sweep_workers = to_int(value);
            else if (key == "plan.theta") c.plan_theta = to_double(value);
            else if (key == "plan.alpha1") c.plan_alpha1 = to_double(value);
            else if (key == "reconstruct.target") c.target = parse_sigma(value);
            else if (key == "reconstruct.init") c.init = parse_sigma(value);
            else if (key == "reconstruct.keep_target_trace") c.init_keeps_target_trace = to_bool(value);
            else if (key == "out") c.out = value;
            else throw ConfigError("unknown key '" + key + "'");
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }

    if (c.n < 8) throw ConfigError("grid.n must be >= 8");
    try {
        validate_exponent(c.p);
        c.inversion_options().validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!(c.solver.rel_tol > 0.0) || c.solver.max_iter_factor < 1) {
        throw ConfigError("solver.tol must be > 0 and solver.max_iter_factor >= 1");
    }
    if (!(c.grad_floor >= 0.0)) throw ConfigError("grad_floor must be >= 0");
    if (!(c.noise_level >= 0.0)) throw ConfigError("noise.level must be >= 0");
    for (double e : c.sweep_eps) {
        if (!(e > 0.0)) throw ConfigError("sweep.eps entries must be > 0");
    }
    for (double e : c.sweep_noise) {
        if (!(e > 0.0)) throw ConfigError("sweep.noise entries must be > 0");
    }
    for (int b : c.sweep_band) {
        if (b < 1 || b >= c.n) throw ConfigError("sweep.band entries must lie in [1, grid.n)");
    }
    if (c.sweep_samples < 10) throw ConfigError("sweep.samples must be >= 10");
    if (c.sweep_workers < 1) throw ConfigError("sweep.workers must be >= 1");
    if (!(c.plan_theta > 0.0 && c.plan_theta < 1.0)) throw ConfigError("plan.theta must lie in (0,1)");
    if (!(c.plan_alpha1 > 0.0 && c.plan_alpha1 <= 1.0)) throw ConfigError("plan.alpha1 must lie in (0,1]");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    ExperimentConfig c = parse_config(in);
    // Field files are looked up next to the config.
    for (SigmaSpec* s : {&c.sigma, &c.target, &c.init}) {
        if (s->kind != SigmaSpec::Kind::file) continue;
        if (s->path.is_relative()) s->path = path.parent_path() / s->path;
        if (!std::filesystem::is_regular_file(s->path)) {
            throw ConfigError("sigma file not found: " + s->path.string());
        }
    }
    return c;
}

}  // namespace hip::cli
