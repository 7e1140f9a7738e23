#include "oplearn/burgers.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oplearn {

namespace {
// Thomas algorithm for a tridiagonal system; overwrites its inputs.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
    const size_t n = diag.size();
    for (size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}
} // namespace

FieldSolution burgers_solve(const Tensor& u0, const Grid1D& grid, double dt, double horizon,
                            long n_out) {
    const long m = grid.points;
    if (m < 8) throw std::invalid_argument("burgers: need at least 8 grid points");
    if (u0.rank() != 1 || u0.numel() != m)
        throw std::invalid_argument("burgers: initial condition does not match the grid");
    if (u0[0] != 0.0 || u0[m - 1] != 0.0)
        throw std::invalid_argument("burgers: initial condition must vanish on the boundary");
    if (dt <= 0 || horizon <= 0 || n_out < 2)
        throw std::invalid_argument("burgers: invalid time parameters");

    const double h = grid.spacing(BoundaryKind::DirichletZero);
    double umax = 0.0;
    for (long i = 0; i < m; ++i) umax = std::max(umax, std::fabs(u0[i]));
    // cell Peclet condition keeps the implicit matrix an M-matrix
    if (umax * h / 2.0 > 1.0)
        throw std::runtime_error("burgers: stability bound violated (max|u| h/2 > 1)");

    const long total_steps = std::llround(horizon / dt);
    if (total_steps < n_out - 1 || std::fabs(total_steps * dt - horizon) > 1e-9 * horizon ||
        total_steps % (n_out - 1) != 0)
        throw std::invalid_argument("burgers: horizon must be a multiple of (n_out-1) steps");
    const long stride = total_steps / (n_out - 1);

    FieldSolution out;
    out.grid = grid;
    out.bc = BoundaryKind::DirichletZero;
    out.dt_out = horizon / static_cast<double>(n_out - 1);
    out.u = Tensor({n_out, m});

    std::vector<double> u(u0.data(), u0.data() + m);
    for (long j = 0; j < m; ++j) out.u.at(0, j) = u[j];

    const double r = dt / (h * h);
    const double q = dt / (2.0 * h);
    std::vector<double> lower(m), diag(m), upper(m), rhs(m);

    long written = 1;
    for (long step = 1; step <= total_steps; ++step) {
        lower[0] = 0.0;
        diag[0] = 1.0;
        upper[0] = 0.0;
        rhs[0] = 0.0;
        for (long i = 1; i < m - 1; ++i) {
            const double a = u[static_cast<size_t>(i)];
            lower[static_cast<size_t>(i)] = -(r + q * a);
            diag[static_cast<size_t>(i)] = 1.0 + 2.0 * r;
            upper[static_cast<size_t>(i)] = -(r - q * a);
            rhs[static_cast<size_t>(i)] = a;
        }
        lower[m - 1] = 0.0;
        diag[m - 1] = 1.0;
        upper[m - 1] = 0.0;
        rhs[m - 1] = 0.0;

        solve_tridiagonal(lower, diag, upper, rhs);
        u.swap(rhs);

        if (step % stride == 0) {
            for (long j = 0; j < m; ++j) {
                if (!std::isfinite(u[static_cast<size_t>(j)]))
                    throw std::runtime_error("burgers: non-finite field at step " +
                                             std::to_string(step));
                out.u.at(written, j) = u[static_cast<size_t>(j)];
            }
            ++written;
        }
    }
    return out;
}

} // namespace oplearn
