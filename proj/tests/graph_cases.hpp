#pragma once

// Random small differentiable graphs covering every tape primitive. Shared
// between the unit tests and the acceptance suite: each case owns its
// parameters and can rebuild its loss on any tape, so the same case drives
// both the autodiff pass and the finite-difference oracle.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "oplearn/autodiff.hpp"
#include "oplearn/networks.hpp"
#include "oplearn/random.hpp"

namespace testutil {

struct GraphCase {
    std::string name;
    std::shared_ptr<std::vector<oplearn::Parameter>> params;
    std::function<oplearn::Value(oplearn::Tape&)> build;
};

inline double graph_loss(const GraphCase& c) {
    oplearn::Tape tape;
    return tape.scalar_of(c.build(tape));
}

inline GraphCase make_graph_case(int index, std::uint64_t seed) {
    using namespace oplearn;
    RandomStream rng(derive_seed(seed, "graph" + std::to_string(index)));
    auto params = std::make_shared<std::vector<Parameter>>();
    params->reserve(16);

    auto add_param = [&](std::vector<long> shape, const std::string& id) {
        Tensor t(std::move(shape));
        for (long i = 0; i < t.numel(); ++i) t[i] = rng.uniform(-1.2, 1.2);
        params->emplace_back(std::move(t), id);
        return params->size() - 1;
    };
    auto rand_tensor = [&](std::vector<long> shape, double lo, double hi) {
        Tensor t(std::move(shape));
        for (long i = 0; i < t.numel(); ++i) t[i] = rng.uniform(lo, hi);
        return t;
    };
    auto dim = [&](long lo, long hi) { return lo + static_cast<long>(rng.raw() % (hi - lo + 1)); };

    GraphCase c;
    c.params = params;
    const int kind = index % 8;
    switch (kind) {
    case 0: { // small tanh net under mean squared error
        const long in = dim(1, 6), out = dim(1, 6), rows = dim(1, 4);
        const long hidden = dim(2, 8), layers = dim(1, 2);
        std::vector<size_t> ws, bs;
        long prev = in;
        for (long l = 0; l <= layers; ++l) {
            const long next = (l == layers) ? out : hidden;
            ws.push_back(add_param({next, prev}, "w" + std::to_string(l)));
            bs.push_back(add_param({next}, "b" + std::to_string(l)));
            prev = next;
        }
        Tensor x = rand_tensor({rows, in}, -1, 1);
        Tensor target = rand_tensor({rows, out}, -1, 1);
        c.name = "mlp_mse";
        c.build = [params, ws, bs, x, target](Tape& t) {
            Value v = t.leaf(x);
            for (size_t l = 0; l < ws.size(); ++l) {
                v = t.linear(v, t.param((*params)[ws[l]]), t.param((*params)[bs[l]]));
                if (l + 1 < ws.size()) v = t.tanh_(v);
            }
            return t.mse_to(v, target);
        };
        break;
    }
    case 1: { // sigmoid head with binary cross entropy
        const long in = dim(1, 6), rows = dim(2, 6), hidden = dim(2, 8);
        const size_t w0 = add_param({hidden, in}, "w0");
        const size_t b0 = add_param({hidden}, "b0");
        const size_t w1 = add_param({1, hidden}, "w1");
        const size_t b1 = add_param({1}, "b1");
        Tensor x = rand_tensor({rows, in}, -1, 1);
        Tensor target({rows, 1});
        for (long i = 0; i < rows; ++i) target[i] = (rng.raw() % 2) ? 1.0 : 0.0;
        c.name = "sigmoid_bce";
        c.build = [params, w0, b0, w1, b1, x, target](Tape& t) {
            Value v = t.linear(t.leaf(x), t.param((*params)[w0]), t.param((*params)[b0]));
            v = t.tanh_(v);
            v = t.linear(v, t.param((*params)[w1]), t.param((*params)[b1]));
            return t.bce_to(t.sigmoid_(v), target);
        };
        break;
    }
    case 2: { // banded operator pushed toward orthogonality
        const long d = dim(2, 6);
        const size_t k = add_param({d, d}, "k");
        Tensor mask = tridiagonal_mask(d);
        Tensor eye = Tensor::identity(d);
        c.name = "band_orth";
        c.build = [params, k, mask, eye](Tape& t) {
            Value km = t.cmul(t.param((*params)[k]), mask);
            Value gram = t.matmul_nt(km, km);
            return t.sum(t.square(t.sub(gram, t.leaf(eye))));
        };
        break;
    }
    case 3: { // dot product of two projected vectors
        const long in = dim(1, 5), p = dim(2, 6);
        const size_t wa = add_param({p, in}, "wa");
        const size_t ba = add_param({p}, "ba");
        const size_t wb = add_param({p, in}, "wb");
        const size_t bb = add_param({p}, "bb");
        Tensor xa = rand_tensor({in}, -1, 1);
        Tensor xb = rand_tensor({in}, -1, 1);
        c.name = "dot_square";
        c.build = [params, wa, ba, wb, bb, xa, xb](Tape& t) {
            Value a = t.tanh_(t.linear(t.leaf(xa), t.param((*params)[wa]), t.param((*params)[ba])));
            Value b = t.linear(t.leaf(xb), t.param((*params)[wb]), t.param((*params)[bb]));
            return t.scale(t.square(t.dot(a, b)), 0.5);
        };
        break;
    }
    case 4: { // per-row dots against gathered rows
        const long c_in = dim(1, 4), p = dim(2, 6), n = dim(3, 8), s = dim(1, 3);
        const size_t wt = add_param({p, c_in}, "wt");
        const size_t bt = add_param({p}, "bt");
        const size_t br = add_param({s, p}, "branch");
        Tensor q = rand_tensor({n, c_in}, -1, 1);
        Tensor target = rand_tensor({n}, -1, 1);
        std::vector<int> idx(static_cast<size_t>(n));
        for (auto& i : idx) i = static_cast<int>(rng.raw() % static_cast<std::uint64_t>(s));
        c.name = "gather_rowdot";
        c.build = [params, wt, bt, br, q, target, idx](Tape& t) {
            Value tr = t.tanh_(t.linear(t.leaf(q), t.param((*params)[wt]), t.param((*params)[bt])));
            Value pred = t.gather_rowdot(tr, t.param((*params)[br]), idx);
            return t.mse_to(pred, target);
        };
        break;
    }
    case 5: { // elementwise chain
        const long len = dim(2, 8);
        const size_t x = add_param({len}, "x");
        const size_t y = add_param({len}, "y");
        c.name = "elementwise";
        c.build = [params, x, y](Tape& t) {
            Value xv = t.param((*params)[x]);
            Value yv = t.param((*params)[y]);
            Value u = t.mul(t.add(xv, yv), t.sub(xv, t.scale(yv, 0.7)));
            return t.mean(t.square(u));
        };
        break;
    }
    case 6: { // repeated bias-free linear map
        const long d = dim(2, 6), times = dim(1, 10), rows = dim(1, 3);
        const size_t k = add_param({d, d}, "k");
        Tensor mask = tridiagonal_mask(d);
        Tensor e0 = rand_tensor({rows, d}, -1, 1);
        Tensor target = rand_tensor({rows, d}, -1, 1);
        // keep powers bounded: shrink toward a contraction
        for (long i = 0; i < (*params)[k].value.numel(); ++i) (*params)[k].value[i] *= 0.5;
        c.name = "linear_chain";
        c.build = [params, k, mask, e0, target, times](Tape& t) {
            Value km = t.cmul(t.param((*params)[k]), mask);
            Value e = t.leaf(e0);
            for (long i = 0; i < times; ++i) e = t.linear_nobias(e, km);
            return t.mse_to(e, target);
        };
        break;
    }
    default: { // row concatenation of two heads
        const long in = dim(1, 5), out = dim(1, 5), r1 = dim(1, 3), r2 = dim(1, 3);
        const size_t w1 = add_param({out, in}, "w1");
        const size_t b1 = add_param({out}, "b1");
        const size_t w2 = add_param({out, in}, "w2");
        const size_t b2 = add_param({out}, "b2");
        Tensor xa = rand_tensor({r1, in}, -1, 1);
        Tensor xb = rand_tensor({r2, in}, -1, 1);
        Tensor target = rand_tensor({r1 + r2, out}, -1, 1);
        c.name = "concat_rows";
        c.build = [params, w1, b1, w2, b2, xa, xb, target](Tape& t) {
            Value a = t.linear(t.leaf(xa), t.param((*params)[w1]), t.param((*params)[b1]));
            Value b = t.linear(t.leaf(xb), t.param((*params)[w2]), t.param((*params)[b2]));
            Value cat = t.tanh_(t.concat_rows({a, b}));
            return t.mse_to(cat, target);
        };
        break;
    }
    }
    c.name += "#" + std::to_string(index);
    return c;
}

} // namespace testutil
