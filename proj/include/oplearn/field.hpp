#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "oplearn/tensor.hpp"

namespace oplearn {

enum class BoundaryKind { DirichletZero, Periodic };

inline std::string to_string(BoundaryKind bc) {
    return bc == BoundaryKind::DirichletZero ? "dirichlet_zero" : "periodic";
}

inline BoundaryKind boundary_from_string(const std::string& s) {
    if (s == "dirichlet_zero") return BoundaryKind::DirichletZero;
    if (s == "periodic") return BoundaryKind::Periodic;
    throw std::invalid_argument("unknown boundary kind: " + s);
}

// Uniform 1D grid. Dirichlet grids include both endpoints; periodic grids
// drop the duplicate right endpoint.
struct Grid1D {
    double length = 1.0;
    long points = 128;

    double spacing(BoundaryKind bc) const {
        return bc == BoundaryKind::DirichletZero ? length / static_cast<double>(points - 1)
                                                 : length / static_cast<double>(points);
    }
    std::vector<double> coordinates(BoundaryKind bc) const {
        const double h = spacing(bc);
        std::vector<double> x(static_cast<size_t>(points));
        for (long i = 0; i < points; ++i) x[static_cast<size_t>(i)] = h * static_cast<double>(i);
        return x;
    }
};

// Space-time field: row s holds the solution at time s * dt_out.
struct FieldSolution {
    Tensor u;
    double dt_out = 0.0;
    Grid1D grid;
    BoundaryKind bc = BoundaryKind::DirichletZero;

    long slices() const { return u.rows(); }
    long space_points() const { return u.cols(); }
};

} // namespace oplearn
