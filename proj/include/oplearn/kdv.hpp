#pragma once

#include "oplearn/field.hpp"

namespace oplearn {

// u_t = 6 u u_x - u_xxx on a periodic domain of length L.
//
// Fourier pseudospectral in space with fourth-order exponential time
// differencing (ETDRK4) for the stiff dispersion term; the nonlinear term is
// evaluated as 3 (u^2)_x in spectral space with 2/3-rule dealiasing, which
// conserves the spatial mean to machine precision. The grid size must be a
// power of two and `horizon` a multiple of (n_out - 1) internal steps.
//
// Throws when the field blows up or the active spectrum piles up against the
// dealiasing cutoff.
FieldSolution kdv_solve(const Tensor& u0, const Grid1D& grid, double dt, double horizon,
                        long n_out);

// Single soliton of the sign convention above: a left-down bump of amplitude
// -c/2 travelling right at speed c.
double kdv_soliton(double x, double t, double speed, double center);

} // namespace oplearn
