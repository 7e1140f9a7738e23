#pragma once

// Elementwise transcendental loops, compiled in their own unit with
// vectorization-friendly flags. In-place on purpose: activations overwrite
// the copied input buffer of their tape node.

namespace oplearn::fastmath {

void vtanh(double* x, long n);
void vsigmoid(double* x, long n);

} // namespace oplearn::fastmath
