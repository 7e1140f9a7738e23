#include "oplearn/ode.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oplearn {

OdeSystem pendulum_system() {
    return {"pendulum", 2, [](const double* s, double* d) {
                d[0] = s[1];
                d[1] = -std::sin(s[0]);
            }};
}

OdeSystem lorenz_system() {
    return {"lorenz", 3, [](const double* s, double* d) {
                d[0] = s[1] - s[0];
                d[1] = s[0] - s[0] * s[2] - s[1];
                d[2] = s[0] * s[1] - s[2];
            }};
}

OdeSystem fluid_attractor_system() {
    return {"fluid_attractor", 3, [](const double* s, double* d) {
                d[0] = s[0] - s[1] + s[0] * s[2];
                d[1] = s[0] + s[1] + s[1] * s[2];
                d[2] = s[0] * s[0] + s[1] * s[1] + s[2];
            }};
}

OdeSystem ode_system_by_name(const std::string& name) {
    if (name == "pendulum") return pendulum_system();
    if (name == "lorenz") return lorenz_system();
    if (name == "fluid_attractor") return fluid_attractor_system();
    throw std::invalid_argument("unknown ode system: " + name);
}

namespace {
void eval_rhs(const OdeSystem& sys, const double* s, double* d) {
    sys.rhs(s, d);
    for (long i = 0; i < sys.dim; ++i)
        if (!std::isfinite(d[i]))
            throw std::runtime_error("ode " + sys.name + ": non-finite right-hand side");
}
} // namespace

void rk4_step(const OdeSystem& sys, const double* state, double dt, double* out) {
    if (dt <= 0) throw std::invalid_argument("rk4_step: dt must be positive");
    const long n = sys.dim;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    eval_rhs(sys, state, k1.data());
    for (long i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
    eval_rhs(sys, tmp.data(), k2.data());
    for (long i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
    eval_rhs(sys, tmp.data(), k3.data());
    for (long i = 0; i < n; ++i) tmp[i] = state[i] + dt * k3[i];
    eval_rhs(sys, tmp.data(), k4.data());

    for (long i = 0; i < n; ++i)
        out[i] = state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

Tensor rk4_step(const OdeSystem& sys, const Tensor& state, double dt) {
    if (state.numel() != sys.dim) throw std::invalid_argument("rk4_step: state dimension mismatch");
    Tensor out({sys.dim});
    rk4_step(sys, state.data(), dt, out.data());
    return out;
}

Trajectory integrate(const OdeSystem& sys, const Tensor& s0, double dt, long steps) {
    if (steps < 1) throw std::invalid_argument("integrate: need at least one step");
    if (s0.numel() != sys.dim) throw std::invalid_argument("integrate: state dimension mismatch");

    Trajectory traj;
    traj.dt = dt;
    traj.steps = steps;
    traj.states = Tensor({steps + 1, sys.dim});
    for (long j = 0; j < sys.dim; ++j) traj.states.at(0, j) = s0[j];

    for (long i = 0; i < steps; ++i) {
        const double* cur = traj.states.data() + i * sys.dim;
        double* next = traj.states.data() + (i + 1) * sys.dim;
        rk4_step(sys, cur, dt, next);
        for (long j = 0; j < sys.dim; ++j)
            if (!std::isfinite(next[j]))
                throw std::runtime_error("integrate " + sys.name + ": non-finite state at step " +
                                         std::to_string(i + 1));
    }
    return traj;
}

} // namespace oplearn
