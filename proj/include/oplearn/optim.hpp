#pragma once

#include <vector>

#include "oplearn/autodiff.hpp"

namespace oplearn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adam with bias correction. Consumes the grad slot of each parameter's value
// tensor and clears it afterwards.
class Adam {
public:
    Adam(std::vector<Parameter*> params, AdamConfig cfg = {});

    void step();
    long step_count() const { return step_; }
    const AdamConfig& config() const { return cfg_; }

private:
    std::vector<Parameter*> params_;
    AdamConfig cfg_;
    std::vector<std::vector<double>> m_, v_;
    long step_ = 0;
};

// Joint Euclidean norm of all parameter gradients.
double global_grad_norm(const std::vector<Parameter*>& params);

// Scales every gradient by max_norm/norm when the joint norm exceeds
// max_norm; otherwise leaves them untouched.
void clip_global_norm(const std::vector<Parameter*>& params, double max_norm);

// Running average of parameter snapshots. Accumulates a running sum in a
// fixed order and divides at finalize time.
class SwaState {
public:
    explicit SwaState(const std::vector<Parameter*>& params);

    void accumulate(const std::vector<Parameter*>& params);
    long count() const { return count_; }

    // Writes the arithmetic mean of the snapshots into the parameters.
    // Throws when nothing has been accumulated.
    void write_average(const std::vector<Parameter*>& params) const;

private:
    std::vector<std::vector<double>> sums_;
    std::vector<std::string> ids_;
    long count_ = 0;
};

} // namespace oplearn
