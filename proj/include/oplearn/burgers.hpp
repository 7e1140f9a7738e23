#pragma once

#include "oplearn/field.hpp"

namespace oplearn {

// u_t = u_xx - u u_x on [0, L] with zero Dirichlet boundaries.
//
// Linearized semi-implicit march: every internal step solves a tridiagonal
// system with centered second differences for the diffusion and centered
// advection frozen at the current state. The matrix is an M-matrix with unit
// row sums whenever max|u| h / 2 <= 1, which is checked up front, so the
// discrete solution obeys the maximum principle.
//
// `horizon` must be an exact multiple of (n_out - 1) internal steps; the
// recorded slices include t = 0.
FieldSolution burgers_solve(const Tensor& u0, const Grid1D& grid, double dt, double horizon,
                            long n_out);

} // namespace oplearn
