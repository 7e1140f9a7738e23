#pragma once

#include <functional>
#include <string>

#include "oplearn/tensor.hpp"

namespace oplearn {

struct OdeSystem {
    std::string name;
    long dim = 0;
    std::function<void(const double* state, double* deriv)> rhs;
};

// theta'' = -sin(theta), reduced to first order as (theta, theta_dot)
OdeSystem pendulum_system();

// x' = y - x, y' = x - x z - y, z' = x y - z
OdeSystem lorenz_system();

// x' = x - y + x z, y' = x + y + y z, z' = x^2 + y^2 + z
OdeSystem fluid_attractor_system();

OdeSystem ode_system_by_name(const std::string& name);

// Uniformly sampled states of one solution; row i is the state at time i*dt.
struct Trajectory {
    Tensor states;
    double dt = 0.0;
    long steps = 0;
    long dim() const { return states.cols(); }
};

// Classical 4th-order Runge-Kutta update. Throws when the right-hand side
// produces a non-finite derivative.
void rk4_step(const OdeSystem& sys, const double* state, double dt, double* out);
Tensor rk4_step(const OdeSystem& sys, const Tensor& state, double dt);

// n steps from s0; records all n+1 states. Throws with the step index when
// the state leaves the finite range.
Trajectory integrate(const OdeSystem& sys, const Tensor& s0, double dt, long steps);

} // namespace oplearn
