#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oplearn/tensor.hpp"

namespace oplearn {

// Named model weight. The id is unique within a model and the value shape is
// fixed at construction.
struct Parameter {
    Tensor value;
    std::string id;

    Parameter() = default;
    Parameter(Tensor v, std::string name) : value(std::move(v)), id(std::move(name)) {}
};

class Tape;

// Handle to a tape node.
struct Value {
    int idx = -1;
    bool valid() const { return idx >= 0; }
};

// Reverse-mode tape over the primitive set used by the models: affine maps,
// tanh/sigmoid, elementwise add/sub/mul, dot and matrix products, sum/mean,
// square, and the two losses. Graphs are rebuilt per step; backward walks the
// tape in reverse creation order.
class Tape {
public:
    Tape() = default;

    // leaves
    Value leaf(Tensor v);                  // constant, no gradient
    Value param(Parameter& p);             // tracked leaf bound to a parameter

    // y = x W^T (+ bias). x: [in] or [n x in], W: [out x in], bias: [out].
    Value linear(Value x, Value w, Value bias);
    Value linear_nobias(Value x, Value w);

    Value cmul(Value x, Tensor mask);      // elementwise product with a constant
    Value add(Value a, Value b);
    Value sub(Value a, Value b);
    Value mul(Value a, Value b);
    Value scale(Value x, double k);
    Value tanh_(Value x);
    Value sigmoid_(Value x);
    Value square(Value x);
    Value sum(Value x);
    Value mean(Value x);
    Value dot(Value a, Value b);           // rank-1 x rank-1 -> scalar
    Value matmul_nt(Value a, Value b);     // A B^T, A: [m x k], B: [n x k]

    // y[r] = <rows[r] of t, row index_map[r] of b>
    Value gather_rowdot(Value t, Value b, std::vector<int> index_map);

    // stacks the rows of the inputs in order; all inputs share a column count
    Value concat_rows(const std::vector<Value>& parts);

    // scalar losses against constant targets
    Value mse_to(Value pred, Tensor target);
    Value bce_to(Value pred, Tensor target);   // mean binary cross entropy

    const Tensor& val(Value v) const;
    double scalar_of(Value v) const;

    // Reverse pass from a scalar loss. Throws on a non-scalar loss.
    void backward(Value loss);

    const Tensor& grad_of(Value v) const;

    // Adds the gradients of every bound occurrence of each parameter into the
    // parameter's grad slot. Call after backward().
    void accumulate_param_grads(const std::vector<Parameter*>& params) const;

    void reset();
    size_t size() const { return nodes_.size(); }

private:
    enum class Op : std::uint8_t {
        Leaf, Param, Linear, CMul, Add, Sub, Mul, Scale, Tanh, Sigmoid, Square,
        Sum, Mean, Dot, MatMulNT, GatherRowDot, ConcatRows, MseTo, BceTo
    };

    struct Node {
        Op op;
        int a = -1, b = -1, c = -1;
        double k = 0.0;
        bool needs_grad = false;
        Tensor val;
        Tensor grad;
        Tensor aux;                  // constant payload (mask / target)
        std::vector<int> list;       // gather map or concat inputs
        Parameter* bound = nullptr;
    };

    std::vector<Node> nodes_;
    bool ran_backward_ = false;

    int push(Node n);
    Node& at(Value v);
    const Node& at(Value v) const;
    void check_same_shape(const Tensor& x, const Tensor& y, const char* what) const;
};

// ---- scalar building blocks ----

// 1/(1+exp(-x)), evaluated with the stable branch for negative inputs
double sigmoid(double x);

// -(b log a + (1-b) log(1-a)) with inputs clamped to [1e-12, 1-1e-12].
// Rejects a or b outside [0,1].
double bce_loss(double a, double b);

// mean over all entries of squared differences; shapes must match
double mse_loss(const Tensor& pred, const Tensor& target);

} // namespace oplearn
