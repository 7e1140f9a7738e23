#include "oplearn/dataset.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "oplearn/burgers.hpp"
#include "oplearn/kdv.hpp"

static_assert(std::endian::native == std::endian::little,
              "payloads are written as raw host doubles and tagged f64le");

namespace oplearn {

namespace {
constexpr const char* kMagic = "OPLEARN DATASET v1";

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("dataset " + path + ": " + what);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
} // namespace

Trajectory Dataset::trajectory(long index) const {
    if (kind != SampleKind::Trajectory) throw std::logic_error("dataset holds fields");
    Trajectory t;
    t.states = samples.at(static_cast<size_t>(index));
    t.dt = dt;
    t.steps = steps;
    return t;
}

FieldSolution Dataset::field(long index) const {
    if (kind != SampleKind::Field) throw std::logic_error("dataset holds trajectories");
    FieldSolution f;
    f.u = samples.at(static_cast<size_t>(index));
    f.dt_out = dt_out;
    f.grid = grid;
    f.bc = bc;
    return f;
}

Dataset Dataset::slice(long first, long count) const {
    if (first < 0 || count < 0 || first + count > static_cast<long>(samples.size()))
        throw std::out_of_range("dataset slice out of range");
    Dataset out = *this;
    out.samples.assign(samples.begin() + first, samples.begin() + first + count);
    return out;
}

bool is_pde_equation(const std::string& equation) {
    return equation == "burgers" || equation == "kdv";
}

const std::vector<std::string>& all_equations() {
    static const std::vector<std::string> eqs = {"pendulum", "lorenz", "fluid_attractor",
                                                 "burgers", "kdv"};
    return eqs;
}

GenerationSettings generation_settings(const std::string& equation) {
    GenerationSettings s;
    if (equation == "pendulum" || equation == "lorenz" || equation == "fluid_attractor") {
        s.dt_internal = 0.01;
        s.ode_steps = 100;
        s.horizon = 1.0;
        return s;
    }
    if (equation == "burgers") {
        s.dt_internal = 1e-4;
        s.horizon = 1.0;
        s.field_slices = 101;
        s.grid = {1.0, 128};
        s.bc = BoundaryKind::DirichletZero;
        return s;
    }
    if (equation == "kdv") {
        s.dt_internal = 5e-4;
        s.horizon = 0.5;
        s.field_slices = 101;
        s.grid = {2.0 * std::numbers::pi, 128};
        s.bc = BoundaryKind::Periodic;
        return s;
    }
    throw std::invalid_argument("unknown equation: " + equation);
}

Tensor random_initial_condition(const std::string& equation, RandomStream& rng) {
    if (equation == "pendulum") {
        Tensor s({2});
        s[0] = rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
        s[1] = 0.0;
        return s;
    }
    if (equation == "lorenz") {
        Tensor s({3});
        for (long i = 0; i < 3; ++i) s[i] = rng.uniform(-1.0, 1.0);
        return s;
    }
    if (equation == "fluid_attractor") {
        Tensor s({3});
        s[0] = rng.uniform(-0.5, 0.5);
        s[1] = rng.uniform(-0.5, 0.5);
        s[2] = rng.uniform(-0.5, 0.0);
        return s;
    }

    const GenerationSettings gs = generation_settings(equation);
    const long m = gs.grid.points;
    const std::vector<double> x = gs.grid.coordinates(gs.bc);
    Tensor u({m});
    constexpr int kModes = 6;
    if (equation == "burgers") {
        // sine series vanishes at both endpoints
        for (int k = 1; k <= kModes; ++k) {
            const double a = rng.uniform(-1.0 / k, 1.0 / k);
            const double w = std::numbers::pi * k / gs.grid.length;
            for (long j = 0; j < m; ++j) u[j] += a * std::sin(w * x[static_cast<size_t>(j)]);
        }
    } else { // kdv: real Fourier series, periodic by construction
        for (int k = 1; k <= kModes; ++k) {
            const double a = rng.uniform(-1.0 / k, 1.0 / k);
            const double b = rng.uniform(-1.0 / k, 1.0 / k);
            const double w = 2.0 * std::numbers::pi * k / gs.grid.length;
            for (long j = 0; j < m; ++j)
                u[j] += a * std::cos(w * x[static_cast<size_t>(j)]) +
                        b * std::sin(w * x[static_cast<size_t>(j)]);
        }
    }
    double amax = 0.0;
    for (long j = 0; j < m; ++j) amax = std::max(amax, std::fabs(u[j]));
    if (amax < 1e-12) {
        // degenerate draw: fall back to the first basis function
        const double w = (equation == "burgers" ? std::numbers::pi : 2.0 * std::numbers::pi) /
                         gs.grid.length;
        for (long j = 0; j < m; ++j) u[j] = std::sin(w * x[static_cast<size_t>(j)]);
        amax = 1.0;
    }
    for (long j = 0; j < m; ++j) u[j] /= amax;
    if (equation == "burgers") {
        u[0] = 0.0;
        u[m - 1] = 0.0;
    }
    return u;
}

Dataset generate_dataset(const std::string& equation, long count, std::uint64_t base_seed) {
    if (count < 0) throw std::invalid_argument("generate_dataset: negative count");
    const GenerationSettings gs = generation_settings(equation);

    Dataset ds;
    ds.equation = equation;
    ds.base_seed = base_seed;
    if (is_pde_equation(equation)) {
        ds.kind = SampleKind::Field;
        ds.grid = gs.grid;
        ds.bc = gs.bc;
        ds.slices = gs.field_slices;
        ds.dt_out = gs.horizon / static_cast<double>(gs.field_slices - 1);
    } else {
        ds.kind = SampleKind::Trajectory;
        ds.state_dim = ode_system_by_name(equation).dim;
        ds.steps = gs.ode_steps;
        ds.dt = gs.dt_internal;
    }

    ds.samples.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) {
        RandomStream rng(derive_seed(base_seed, "sample" + std::to_string(i)));
        const Tensor ic = random_initial_condition(equation, rng);
        if (ds.kind == SampleKind::Trajectory) {
            const OdeSystem sys = ode_system_by_name(equation);
            ds.samples.push_back(integrate(sys, ic, gs.dt_internal, gs.ode_steps).states);
        } else if (equation == "burgers") {
            ds.samples.push_back(
                burgers_solve(ic, gs.grid, gs.dt_internal, gs.horizon, gs.field_slices).u);
        } else {
            ds.samples.push_back(
                kdv_solve(ic, gs.grid, gs.dt_internal, gs.horizon, gs.field_slices).u);
        }
    }
    return ds;
}

void write_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");

    out << kMagic << '\n';
    out << "equation: " << ds.equation << '\n';
    out << "kind: " << (ds.kind == SampleKind::Trajectory ? "trajectory" : "field") << '\n';
    out << "samples: " << ds.samples.size() << '\n';
    out << "dtype: f64le\n";
    out << "base_seed: " << ds.base_seed << '\n';
    if (ds.kind == SampleKind::Trajectory) {
        out << "state_dim: " << ds.state_dim << '\n';
        out << "steps: " << ds.steps << '\n';
        out << "dt: " << format_double(ds.dt) << '\n';
    } else {
        out << "grid_points: " << ds.grid.points << '\n';
        out << "grid_length: " << format_double(ds.grid.length) << '\n';
        out << "bc: " << to_string(ds.bc) << '\n';
        out << "slices: " << ds.slices << '\n';
        out << "dt_out: " << format_double(ds.dt_out) << '\n';
    }
    out << "END HEADER\n";
    for (const Tensor& s : ds.samples)
        out.write(reinterpret_cast<const char*>(s.data()),
                  static_cast<std::streamsize>(s.numel() * sizeof(double)));
    if (!out) fail(path, "write failed");
}

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");

    std::string line;
    if (!std::getline(in, line) || line != kMagic) fail(path, "bad magic line");

    Dataset ds;
    long count = -1;
    bool saw_dtype = false;
    while (std::getline(in, line)) {
        if (line == "END HEADER") break;
        const size_t colon = line.find(": ");
        if (colon == std::string::npos) fail(path, "malformed header line: " + line);
        const std::string key = line.substr(0, colon);
        const std::string value = line.substr(colon + 2);
        try {
            if (key == "equation") ds.equation = value;
            else if (key == "kind")
                ds.kind = value == "trajectory" ? SampleKind::Trajectory
                        : value == "field"      ? SampleKind::Field
                                                : throw std::invalid_argument("bad kind " + value);
            else if (key == "samples") count = std::stol(value);
            else if (key == "dtype") {
                if (value != "f64le") fail(path, "unsupported dtype " + value);
                saw_dtype = true;
            } else if (key == "base_seed") ds.base_seed = std::stoull(value);
            else if (key == "state_dim") ds.state_dim = std::stol(value);
            else if (key == "steps") ds.steps = std::stol(value);
            else if (key == "dt") ds.dt = std::stod(value);
            else if (key == "grid_points") ds.grid.points = std::stol(value);
            else if (key == "grid_length") ds.grid.length = std::stod(value);
            else if (key == "bc") ds.bc = boundary_from_string(value);
            else if (key == "slices") ds.slices = std::stol(value);
            else if (key == "dt_out") ds.dt_out = std::stod(value);
            else fail(path, "unknown header key: " + key);
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception& e) {
            fail(path, "bad value in line '" + line + "': " + e.what());
        }
    }
    if (line != "END HEADER") fail(path, "truncated header");
    if (ds.equation.empty() || count < 0 || !saw_dtype) fail(path, "incomplete header");

    const long rows = ds.sample_rows();
    const long cols = ds.sample_cols();
    if (rows <= 0 || cols <= 0) fail(path, "inconsistent shape metadata");

    ds.samples.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) {
        Tensor s({rows, cols});
        in.read(reinterpret_cast<char*>(s.data()),
                static_cast<std::streamsize>(s.numel() * sizeof(double)));
        if (in.gcount() != static_cast<std::streamsize>(s.numel() * sizeof(double)))
            fail(path, "truncated payload at sample " + std::to_string(i));
        ds.samples.push_back(std::move(s));
    }
    char extra;
    if (in.read(&extra, 1)) fail(path, "trailing bytes after payload");
    return ds;
}

std::uint64_t dataset_checksum(const Dataset& ds) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix_bytes = [&h](const void* p, size_t n) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    };
    mix_bytes(ds.equation.data(), ds.equation.size());
    mix_bytes(&ds.base_seed, sizeof ds.base_seed);
    for (const Tensor& s : ds.samples)
        mix_bytes(s.data(), static_cast<size_t>(s.numel()) * sizeof(double));
    return h;
}

} // namespace oplearn
