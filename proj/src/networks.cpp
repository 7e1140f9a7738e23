#include "oplearn/networks.hpp"

#include <cmath>
#include <stdexcept>

namespace oplearn {

Mlp Mlp::make(std::vector<long> widths, std::string_view id_prefix, RandomStream& rng) {
    if (widths.size() < 2) throw std::invalid_argument("mlp: need at least input and output widths");
    for (long w : widths)
        if (w <= 0) throw std::invalid_argument("mlp: widths must be positive");

    Mlp net;
    net.widths = std::move(widths);
    const size_t layers = net.widths.size() - 1;
    net.weights.reserve(layers);
    net.biases.reserve(layers);
    for (size_t l = 0; l < layers; ++l) {
        const long fan_in = net.widths[l];
        const long fan_out = net.widths[l + 1];
        Tensor w({fan_out, fan_in});
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (long i = 0; i < w.numel(); ++i) w[i] = rng.uniform(-bound, bound);
        const std::string tag = std::string(id_prefix) + "." + std::to_string(l);
        net.weights.emplace_back(std::move(w), tag + ".w");
        net.biases.emplace_back(Tensor({fan_out}), tag + ".b");
    }
    return net;
}

Value Mlp::forward(Tape& tape, Value x) {
    const size_t layers = weights.size();
    for (size_t l = 0; l < layers; ++l) {
        x = tape.linear(x, tape.param(weights[l]), tape.param(biases[l]));
        if (l + 1 < layers) x = tape.tanh_(x);
    }
    return x;
}

Tensor Mlp::forward(const Tensor& x) const {
    Tape tape;
    Value v = tape.leaf(x);
    const size_t layers = weights.size();
    for (size_t l = 0; l < layers; ++l) {
        v = tape.linear(v, tape.leaf(weights[l].value), tape.leaf(biases[l].value));
        if (l + 1 < layers) v = tape.tanh_(v);
    }
    return tape.val(v);
}

void Mlp::collect_params(std::vector<Parameter*>& out) {
    for (size_t l = 0; l < weights.size(); ++l) {
        out.push_back(&weights[l]);
        out.push_back(&biases[l]);
    }
}

void Mlp::collect_params(std::vector<const Parameter*>& out) const {
    for (size_t l = 0; l < weights.size(); ++l) {
        out.push_back(&weights[l]);
        out.push_back(&biases[l]);
    }
}

Tensor tridiagonal_mask(long dim) {
    Tensor m({dim, dim});
    for (long i = 0; i < dim; ++i)
        for (long j = 0; j < dim; ++j)
            if (std::labs(i - j) <= 1) m.at(i, j) = 1.0;
    return m;
}

TridiagonalOperator TridiagonalOperator::make(long dim, std::string_view id) {
    if (dim <= 0) throw std::invalid_argument("tridiagonal operator: dim must be positive");
    TridiagonalOperator op;
    op.k = Parameter(Tensor::identity(dim), std::string(id));
    op.band_mask = tridiagonal_mask(dim);
    op.apply_mask();
    return op;
}

void TridiagonalOperator::apply_mask() {
    Tensor& m = k.value;
    for (long i = 0; i < m.numel(); ++i) m[i] *= band_mask[i];
}

bool TridiagonalOperator::is_tridiagonal() const {
    const Tensor& m = k.value;
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j)
            if (std::labs(i - j) > 1 && m.at(i, j) != 0.0) return false;
    return true;
}

Value TridiagonalOperator::masked(Tape& tape) {
    return tape.cmul(tape.param(k), band_mask);
}

Value TridiagonalOperator::apply(Tape& tape, Value e, long times) {
    Value m = masked(tape);
    for (long t = 0; t < times; ++t) e = tape.linear_nobias(e, m);
    return e;
}

Tensor TridiagonalOperator::apply(const Tensor& e, long times) const {
    if (e.cols() != dim())
        throw std::invalid_argument("tridiagonal operator: latent width mismatch");
    Tape tape;
    Value m = tape.cmul(tape.leaf(k.value), band_mask);
    Value v = tape.leaf(e);
    for (long t = 0; t < times; ++t) v = tape.linear_nobias(v, m);
    return tape.val(v);
}

Discriminator Discriminator::make(long latent_dim, long hidden_width, long hidden_layers,
                                  RandomStream& rng) {
    std::vector<long> widths{latent_dim};
    for (long l = 0; l < hidden_layers; ++l) widths.push_back(hidden_width);
    widths.push_back(1);
    Discriminator d;
    d.body = Mlp::make(std::move(widths), "disc", rng);
    return d;
}

Value Discriminator::prob(Tape& tape, Value latents) {
    return tape.sigmoid_(body.forward(tape, latents));
}

double Discriminator::discriminate(const Tensor& latent) const {
    if (latent.cols() != latent_dim())
        throw std::invalid_argument("discriminator: latent width mismatch");
    const Tensor logits = body.forward(latent);
    return sigmoid(logits[0]);
}

} // namespace oplearn
