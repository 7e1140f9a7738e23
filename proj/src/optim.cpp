#include "oplearn/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace oplearn {

Adam::Adam(std::vector<Parameter*> params, AdamConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
    if (cfg_.lr <= 0 || cfg_.beta1 <= 0 || cfg_.beta2 <= 0 || cfg_.eps <= 0)
        throw std::invalid_argument("adam: hyperparameters must be positive");
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const Parameter* p : params_) {
        m_.emplace_back(p->value.numel(), 0.0);
        v_.emplace_back(p->value.numel(), 0.0);
    }
}

void Adam::step() {
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (size_t i = 0; i < params_.size(); ++i) {
        Parameter& p = *params_[i];
        std::vector<double>& g = p.value.grad();
        if (g.size() != m_[i].size())
            throw std::invalid_argument("adam: gradient shape mismatch for " + p.id);
        double* w = p.value.data();
        for (size_t j = 0; j < g.size(); ++j) {
            m_[i][j] = cfg_.beta1 * m_[i][j] + (1.0 - cfg_.beta1) * g[j];
            v_[i][j] = cfg_.beta2 * v_[i][j] + (1.0 - cfg_.beta2) * g[j] * g[j];
            const double mhat = m_[i][j] / bc1;
            const double vhat = v_[i][j] / bc2;
            w[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
        p.value.clear_grad();
    }
}

double global_grad_norm(const std::vector<Parameter*>& params) {
    double s = 0.0;
    for (Parameter* p : params) {
        if (!p->value.has_grad()) continue;
        for (double g : p->value.grad()) s += g * g;
    }
    return std::sqrt(s);
}

void clip_global_norm(const std::vector<Parameter*>& params, double max_norm) {
    if (max_norm <= 0) throw std::invalid_argument("clip_global_norm: max_norm must be positive");
    const double norm = global_grad_norm(params);
    if (norm <= max_norm) return;
    const double f = max_norm / norm;
    for (Parameter* p : params) {
        if (!p->value.has_grad()) continue;
        for (double& g : p->value.grad()) g *= f;
    }
}

SwaState::SwaState(const std::vector<Parameter*>& params) {
    sums_.reserve(params.size());
    ids_.reserve(params.size());
    for (const Parameter* p : params) {
        sums_.emplace_back(p->value.numel(), 0.0);
        ids_.push_back(p->id);
    }
}

void SwaState::accumulate(const std::vector<Parameter*>& params) {
    if (params.size() != sums_.size())
        throw std::invalid_argument("swa: parameter list changed size");
    for (size_t i = 0; i < params.size(); ++i) {
        if (params[i]->id != ids_[i] ||
            params[i]->value.numel() != static_cast<long>(sums_[i].size()))
            throw std::invalid_argument("swa: snapshot does not match state for " + ids_[i]);
        const double* w = params[i]->value.data();
        for (size_t j = 0; j < sums_[i].size(); ++j) sums_[i][j] += w[j];
    }
    ++count_;
}

void SwaState::write_average(const std::vector<Parameter*>& params) const {
    if (count_ == 0) throw std::logic_error("swa: no snapshots accumulated");
    if (params.size() != sums_.size())
        throw std::invalid_argument("swa: parameter list changed size");
    const double inv = 1.0 / static_cast<double>(count_);
    for (size_t i = 0; i < params.size(); ++i) {
        double* w = params[i]->value.data();
        for (size_t j = 0; j < sums_[i].size(); ++j) w[j] = sums_[i][j] * inv;
    }
}

} // namespace oplearn
