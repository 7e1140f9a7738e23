#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oplearn/networks.hpp"
#include "oplearn/optim.hpp"

#include "testutil.hpp"

using namespace oplearn;

namespace {
Mlp identity_single_layer(long n) {
    RandomStream rng(1);
    Mlp net = Mlp::make({n, n}, "id", rng);
    net.weights[0].value = Tensor::identity(n);
    net.biases[0].value = Tensor({n});
    return net;
}
} // namespace

TEST_CASE("mlp: single affine layer with identity weights is the identity") {
    Mlp net = identity_single_layer(3);
    const Tensor x = Tensor::from_vector({0.5, -1.5, 2.0});
    const Tensor y = net.forward(x);
    for (long i = 0; i < 3; ++i) CHECK(y[i] == x[i]);
}

TEST_CASE("mlp: all-zero weights and biases give zero output") {
    RandomStream rng(2);
    Mlp net = Mlp::make({4, 5, 2}, "z", rng);
    for (auto& w : net.weights) w.value = Tensor(std::vector<long>(w.value.shape()));
    const Tensor y = net.forward(Tensor::from_vector({1, 2, 3, 4}));
    CHECK(y.numel() == 2);
    CHECK(y[0] == 0.0);
    CHECK(y[1] == 0.0);
}

TEST_CASE("mlp: two-layer forward equals hand-composed evaluation") {
    RandomStream rng(3);
    Mlp net = Mlp::make({2, 3, 1}, "h", rng);
    const Tensor x = Tensor::from_vector({0.4, -0.9});
    const Tensor y = net.forward(x);

    // affine -> tanh -> affine, evaluated with plain scalar loops
    double hidden[3];
    for (long i = 0; i < 3; ++i) {
        double s = net.biases[0].value[i];
        for (long j = 0; j < 2; ++j) s += net.weights[0].value.at(i, j) * x[j];
        hidden[i] = std::tanh(s);
    }
    double out = net.biases[1].value[0];
    for (long i = 0; i < 3; ++i) out += net.weights[1].value.at(0, i) * hidden[i];
    CHECK(y[0] == doctest::Approx(out).epsilon(1e-12));
}

TEST_CASE("mlp: dimension mismatch is rejected") {
    RandomStream rng(4);
    Mlp net = Mlp::make({3, 4, 2}, "m", rng);
    CHECK_THROWS(net.forward(Tensor::from_vector({1.0, 2.0})));
}

TEST_CASE("mlp: forward is deterministic") {
    RandomStream rng(5);
    Mlp net = Mlp::make({3, 8, 8, 2}, "d", rng);
    const Tensor x = Tensor::from_vector({0.1, 0.2, 0.3});
    const Tensor y1 = net.forward(x);
    const Tensor y2 = net.forward(x);
    for (long i = 0; i < y1.numel(); ++i) CHECK(y1[i] == y2[i]);
}

TEST_CASE("tridiagonal mask definition and idempotence") {
    TridiagonalOperator op = TridiagonalOperator::make(3, "k");
    // dense ones collapse to the 7 banded cells
    op.k.value = Tensor::full({3, 3}, 1.0);
    op.apply_mask();
    int nonzero = 0;
    for (long i = 0; i < 3; ++i)
        for (long j = 0; j < 3; ++j) {
            if (std::labs(i - j) <= 1) {
                CHECK(op.k.value.at(i, j) == 1.0);
                ++nonzero;
            } else {
                CHECK(op.k.value.at(i, j) == 0.0);
            }
        }
    CHECK(nonzero == 7);

    const Tensor once = op.k.value;
    op.apply_mask();
    for (long i = 0; i < 9; ++i) CHECK(op.k.value[i] == once[i]);
    CHECK(op.is_tridiagonal());
}

TEST_CASE("koopman operator: identity powers and linearity") {
    TridiagonalOperator op = TridiagonalOperator::make(4, "k");
    const Tensor e = Tensor::from_vector({1.0, -2.0, 0.5, 3.0});
    const Tensor y = op.apply(e, 5);
    for (long i = 0; i < 4; ++i) CHECK(y[i] == e[i]);

    RandomStream rng(6);
    for (long i = 0; i < op.k.value.numel(); ++i) op.k.value[i] = rng.uniform(-1, 1);
    op.apply_mask();

    // one application equals a dense matrix-vector oracle
    const Tensor y1 = op.apply(e, 1);
    for (long i = 0; i < 4; ++i) {
        double s = 0;
        for (long j = 0; j < 4; ++j) s += op.k.value.at(i, j) * e[j];
        CHECK(y1[i] == doctest::Approx(s).epsilon(1e-14));
    }

    // apply(alpha a + beta b) = alpha apply(a) + beta apply(b)
    const Tensor a = Tensor::from_vector({0.2, 0.4, -0.6, 0.8});
    const Tensor b = Tensor::from_vector({-1.0, 0.3, 0.9, 0.1});
    const double alpha = 1.7, beta = -0.4;
    Tensor mix({4});
    for (long i = 0; i < 4; ++i) mix[i] = alpha * a[i] + beta * b[i];
    const Tensor lhs = op.apply(mix, 3);
    const Tensor ra = op.apply(a, 3);
    const Tensor rb = op.apply(b, 3);
    for (long i = 0; i < 4; ++i)
        CHECK(lhs[i] == doctest::Approx(alpha * ra[i] + beta * rb[i]).epsilon(1e-12));
}

TEST_CASE("koopman operator: gradients through repeated application match finite differences") {
    RandomStream rng(7);
    for (long times = 1; times <= 10; times += 3) {
        TridiagonalOperator op = TridiagonalOperator::make(5, "k");
        for (long i = 0; i < op.k.value.numel(); ++i) op.k.value[i] = rng.uniform(-0.6, 0.6);
        op.apply_mask();
        Tensor e0({1, 5}), target({1, 5});
        for (long i = 0; i < 5; ++i) {
            e0[i] = rng.uniform(-1, 1);
            target[i] = rng.uniform(-1, 1);
        }

        auto loss = [&]() {
            Tape t;
            Value km = t.cmul(t.param(op.k), op.band_mask);
            Value e = t.leaf(e0);
            for (long i = 0; i < times; ++i) e = t.linear_nobias(e, km);
            return t.scalar_of(t.mse_to(e, target));
        };
        Tape t;
        Value km = t.cmul(t.param(op.k), op.band_mask);
        Value e = t.leaf(e0);
        for (long i = 0; i < times; ++i) e = t.linear_nobias(e, km);
        Value l = t.mse_to(e, target);
        t.backward(l);
        t.accumulate_param_grads({&op.k});
        Tensor ad(std::vector<long>{5, 5});
        for (long i = 0; i < 25; ++i) ad[i] = op.k.value.grad()[static_cast<size_t>(i)];
        op.k.value.clear_grad();
        const Tensor fd = testutil::fd_grad(op.k, loss);
        CAPTURE(times);
        CHECK(testutil::compare_grads(ad, fd, 1e-5) == "");
    }
}

TEST_CASE("tridiagonal sparsity survives masked optimizer steps") {
    RandomStream rng(8);
    TridiagonalOperator op = TridiagonalOperator::make(6, "k");
    Adam opt({&op.k}, {});
    Tensor e0({2, 6}), target({2, 6});
    for (long i = 0; i < e0.numel(); ++i) {
        e0[i] = rng.uniform(-1, 1);
        target[i] = rng.uniform(-1, 1);
    }
    for (int step = 0; step < 25; ++step) {
        Tape t;
        Value km = t.cmul(t.param(op.k), op.band_mask);
        Value e = t.linear_nobias(t.leaf(e0), km);
        e = t.linear_nobias(e, km);
        Value loss = t.mse_to(e, target);
        t.backward(loss);
        t.accumulate_param_grads({&op.k});
        opt.step();
        op.apply_mask();
        REQUIRE(op.is_tridiagonal());
    }
}

TEST_CASE("discriminator: zero body outputs one half, range stays in (0,1)") {
    RandomStream rng(9);
    Discriminator d = Discriminator::make(4, 8, 2, rng);
    for (auto& w : d.body.weights) w.value = Tensor(std::vector<long>(w.value.shape()));
    for (auto& b : d.body.biases) b.value = Tensor(std::vector<long>(b.value.shape()));
    CHECK(d.discriminate(Tensor::from_vector({1, 2, 3, 4})) == 0.5);

    Discriminator d2 = Discriminator::make(4, 8, 2, rng);
    for (int i = 0; i < 200; ++i) {
        Tensor e({4});
        for (long j = 0; j < 4; ++j) e[j] = rng.normal(0.0, 1e3);
        const double y = d2.discriminate(e);
        CHECK(y > 0.0);
        CHECK(y < 1.0);
    }
}

TEST_CASE("discriminator: tiny body matches scalar hand evaluation") {
    RandomStream rng(10);
    Discriminator d = Discriminator::make(2, 2, 1, rng);
    const Tensor e = Tensor::from_vector({0.3, -0.7});
    double h[2];
    for (long i = 0; i < 2; ++i) {
        double s = d.body.biases[0].value[i];
        for (long j = 0; j < 2; ++j) s += d.body.weights[0].value.at(i, j) * e[j];
        h[i] = std::tanh(s);
    }
    double logit = d.body.biases[1].value[0];
    for (long i = 0; i < 2; ++i) logit += d.body.weights[1].value.at(0, i) * h[i];
    CHECK(d.discriminate(e) == doctest::Approx(sigmoid(logit)).epsilon(1e-12));
}
