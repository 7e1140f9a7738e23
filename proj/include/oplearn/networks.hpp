#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "oplearn/autodiff.hpp"
#include "oplearn/random.hpp"

namespace oplearn {

// Fully connected stack: tanh between layers, identity on the output.
// Weights start uniform in +-sqrt(6/(fan_in+fan_out)), biases at zero.
struct Mlp {
    std::vector<long> widths;
    std::vector<Parameter> weights;
    std::vector<Parameter> biases;

    static Mlp make(std::vector<long> widths, std::string_view id_prefix, RandomStream& rng);

    long input_width() const { return widths.front(); }
    long output_width() const { return widths.back(); }

    // x: [in] or [n x in]
    Value forward(Tape& tape, Value x);
    Tensor forward(const Tensor& x) const;

    void collect_params(std::vector<Parameter*>& out);
    void collect_params(std::vector<const Parameter*>& out) const;
};

// Square bias-free operator constrained to the tridiagonal band. The stored
// matrix is masked at construction and re-masked after every optimizer step;
// the forward path multiplies by the mask as well, so off-band entries never
// receive gradient.
struct TridiagonalOperator {
    Parameter k;
    Tensor band_mask;

    static TridiagonalOperator make(long dim, std::string_view id);

    long dim() const { return k.value.rows(); }

    // Projects the stored matrix onto the band. Idempotent.
    void apply_mask();
    bool is_tridiagonal() const;

    Value masked(Tape& tape);                    // K with the band mask applied
    Value apply(Tape& tape, Value e, long times); // e K^T ... repeated `times` times
    Tensor apply(const Tensor& e, long times) const;

    void collect_params(std::vector<Parameter*>& out) { out.push_back(&k); }
    void collect_params(std::vector<const Parameter*>& out) const { out.push_back(&k); }
};

Tensor tridiagonal_mask(long dim);

// Sigmoid-headed classifier from the latent space to (0,1).
struct Discriminator {
    Mlp body;

    static Discriminator make(long latent_dim, long hidden_width, long hidden_layers,
                              RandomStream& rng);

    long latent_dim() const { return body.input_width(); }

    // latents: [n x d] (or [d]); returns probabilities with the same rows
    Value prob(Tape& tape, Value latents);
    double discriminate(const Tensor& latent) const;

    void collect_params(std::vector<Parameter*>& out) { body.collect_params(out); }
    void collect_params(std::vector<const Parameter*>& out) const { body.collect_params(out); }
};

} // namespace oplearn
