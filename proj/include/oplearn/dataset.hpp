#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oplearn/field.hpp"
#include "oplearn/ode.hpp"
#include "oplearn/random.hpp"

namespace oplearn {

enum class SampleKind { Trajectory, Field };

// A serialized training corpus: homogeneous samples of one equation plus the
// solver metadata needed to interpret them.
struct Dataset {
    std::string equation;
    SampleKind kind = SampleKind::Trajectory;
    std::uint64_t base_seed = 0;

    // trajectory metadata
    long state_dim = 0;
    long steps = 0;
    double dt = 0.0;

    // field metadata
    Grid1D grid;
    BoundaryKind bc = BoundaryKind::DirichletZero;
    long slices = 0;
    double dt_out = 0.0;

    std::vector<Tensor> samples;

    long sample_rows() const { return kind == SampleKind::Trajectory ? steps + 1 : slices; }
    long sample_cols() const { return kind == SampleKind::Trajectory ? state_dim : grid.points; }

    Trajectory trajectory(long index) const;
    FieldSolution field(long index) const;

    // samples [first, first+count) as a new dataset sharing the metadata
    Dataset slice(long first, long count) const;
};

bool is_pde_equation(const std::string& equation);
const std::vector<std::string>& all_equations();

// Fixed generation settings per equation (step sizes, horizons, grids).
struct GenerationSettings {
    double dt_internal = 0.0;
    double horizon = 0.0;
    long ode_steps = 0;
    long field_slices = 0;
    Grid1D grid;
    BoundaryKind bc = BoundaryKind::DirichletZero;
};
GenerationSettings generation_settings(const std::string& equation);

// Random initial state (ODEs) or initial field sampled on the equation grid
// (PDEs). Fields are rescaled to max|u| = 1 and respect their boundary
// conditions by construction.
Tensor random_initial_condition(const std::string& equation, RandomStream& rng);

// count samples; sample i draws from an independent stream derived from
// (base_seed, i), so any subset regenerates identically.
Dataset generate_dataset(const std::string& equation, long count, std::uint64_t base_seed);

void write_dataset(const Dataset& ds, const std::string& path);
Dataset read_dataset(const std::string& path);

// FNV-1a over the metadata and payload; used to audit that paired runs saw
// identical data.
std::uint64_t dataset_checksum(const Dataset& ds);

} // namespace oplearn
