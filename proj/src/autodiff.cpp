#include "oplearn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fastmath.hpp"
#include "kernels.hpp"

namespace oplearn {

namespace {
constexpr double kProbEps = 1e-12;

double clamp_prob(double p) { return std::min(1.0 - kProbEps, std::max(kProbEps, p)); }
} // namespace

double sigmoid(double x) {
    double y;
    if (x >= 0.0) {
        y = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        y = e / (1.0 + e);
    }
    // keep the output strictly inside (0,1) even where exp underflows
    static const double kBelowOne = std::nextafter(1.0, 0.0);
    if (y >= 1.0) return kBelowOne;
    if (y <= 0.0) return std::numeric_limits<double>::min();
    return y;
}

double bce_loss(double a, double b) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("bce_loss: prediction outside [0,1]");
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("bce_loss: target outside [0,1]");
    const double p = clamp_prob(a);
    return -(b * std::log(p) + (1.0 - b) * std::log(1.0 - p));
}

double mse_loss(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) throw std::invalid_argument("mse_loss: shape mismatch");
    double s = 0.0;
    for (long i = 0; i < pred.numel(); ++i) {
        const double d = pred[i] - target[i];
        s += d * d;
    }
    return s / static_cast<double>(pred.numel());
}

int Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

Tape::Node& Tape::at(Value v) {
    if (!v.valid() || v.idx >= static_cast<int>(nodes_.size()))
        throw std::logic_error("tape: invalid value handle");
    return nodes_[static_cast<size_t>(v.idx)];
}

const Tape::Node& Tape::at(Value v) const {
    if (!v.valid() || v.idx >= static_cast<int>(nodes_.size()))
        throw std::logic_error("tape: invalid value handle");
    return nodes_[static_cast<size_t>(v.idx)];
}

void Tape::check_same_shape(const Tensor& x, const Tensor& y, const char* what) const {
    if (!x.same_shape(y))
        throw std::invalid_argument(std::string(what) + ": shape mismatch " + x.shape_string() +
                                    " vs " + y.shape_string());
}

Value Tape::leaf(Tensor v) {
    Node n;
    n.op = Op::Leaf;
    n.val = std::move(v);
    return {push(std::move(n))};
}

Value Tape::param(Parameter& p) {
    Node n;
    n.op = Op::Param;
    n.val = p.value;
    n.needs_grad = true;
    n.bound = &p;
    return {push(std::move(n))};
}

Value Tape::linear(Value x, Value w, Value bias) {
    const Tensor& xv = at(x).val;
    const Tensor& wv = at(w).val;
    if (wv.rank() != 2) throw std::invalid_argument("linear: weight must be rank 2");
    const long in = wv.cols(), out = wv.rows();
    if (xv.cols() != in)
        throw std::invalid_argument("linear: input width " + std::to_string(xv.cols()) +
                                    " does not match weight " + wv.shape_string());
    const long rows = xv.rows();

    Node n;
    n.op = Op::Linear;
    n.a = x.idx;
    n.b = w.idx;
    n.needs_grad = at(x).needs_grad || at(w).needs_grad;
    n.val = xv.rank() == 1 ? Tensor({out}) : Tensor({rows, out});

    // W^T is materialized so the product runs down contiguous rows
    n.aux = Tensor({in, out});
    kern::transpose(wv.data(), n.aux.data(), out, in);
    kern::gemm_nn(xv.data(), n.aux.data(), n.val.data(), rows, out, in);

    if (bias.valid()) {
        const Tensor& bv = at(bias).val;
        if (bv.rank() != 1 || bv.numel() != out)
            throw std::invalid_argument("linear: bias shape mismatch");
        n.c = bias.idx;
        n.needs_grad = n.needs_grad || at(bias).needs_grad;
        double* y = n.val.data();
        const double* bd = bv.data();
        for (long r = 0; r < rows; ++r)
            for (long j = 0; j < out; ++j) y[r * out + j] += bd[j];
    }
    return {push(std::move(n))};
}

Value Tape::linear_nobias(Value x, Value w) { return linear(x, w, Value{}); }

Value Tape::cmul(Value x, Tensor mask) {
    const Tensor& xv = at(x).val;
    check_same_shape(xv, mask, "cmul");
    Node n;
    n.op = Op::CMul;
    n.a = x.idx;
    n.needs_grad = at(x).needs_grad;
    n.val = xv;
    for (long i = 0; i < n.val.numel(); ++i) n.val[i] *= mask[i];
    n.aux = std::move(mask);
    return {push(std::move(n))};
}

Value Tape::add(Value a, Value b) {
    const Tensor& av = at(a).val;
    const Tensor& bv = at(b).val;
    check_same_shape(av, bv, "add");
    Node n;
    n.op = Op::Add;
    n.a = a.idx;
    n.b = b.idx;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = av;
    for (long i = 0; i < n.val.numel(); ++i) n.val[i] += bv[i];
    return {push(std::move(n))};
}

Value Tape::sub(Value a, Value b) {
    const Tensor& av = at(a).val;
    const Tensor& bv = at(b).val;
    check_same_shape(av, bv, "sub");
    Node n;
    n.op = Op::Sub;
    n.a = a.idx;
    n.b = b.idx;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = av;
    for (long i = 0; i < n.val.numel(); ++i) n.val[i] -= bv[i];
    return {push(std::move(n))};
}

Value Tape::mul(Value a, Value b) {
    const Tensor& av = at(a).val;
    const Tensor& bv = at(b).val;
    check_same_shape(av, bv, "mul");
    Node n;
    n.op = Op::Mul;
    n.a = a.idx;
    n.b = b.idx;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = av;
    for (long i = 0; i < n.val.numel(); ++i) n.val[i] *= bv[i];
    return {push(std::move(n))};
}

Value Tape::scale(Value x, double k) {
    Node n;
    n.op = Op::Scale;
    n.a = x.idx;
    n.k = k;
    n.needs_grad = at(x).needs_grad;
    n.val = at(x).val;
    for (long i = 0; i < n.val.numel(); ++i) n.val[i] *= k;
    return {push(std::move(n))};
}

Value Tape::tanh_(Value x) {
    Node n;
    n.op = Op::Tanh;
    n.a = x.idx;
    n.needs_grad = at(x).needs_grad;
    n.val = at(x).val;
    fastmath::vtanh(n.val.data(), n.val.numel());
    return {push(std::move(n))};
}

Value Tape::sigmoid_(Value x) {
    Node n;
    n.op = Op::Sigmoid;
    n.a = x.idx;
    n.needs_grad = at(x).needs_grad;
    n.val = at(x).val;
    fastmath::vsigmoid(n.val.data(), n.val.numel());
    return {push(std::move(n))};
}

Value Tape::square(Value x) {
    Node n;
    n.op = Op::Square;
    n.a = x.idx;
    n.needs_grad = at(x).needs_grad;
    n.val = at(x).val;
    for (long i = 0; i < n.val.numel(); ++i) n.val[i] *= n.val[i];
    return {push(std::move(n))};
}

Value Tape::sum(Value x) {
    Node n;
    n.op = Op::Sum;
    n.a = x.idx;
    n.needs_grad = at(x).needs_grad;
    double s = 0.0;
    for (long i = 0; i < at(x).val.numel(); ++i) s += at(x).val[i];
    n.val = Tensor::scalar(s);
    return {push(std::move(n))};
}

Value Tape::mean(Value x) {
    Node n;
    n.op = Op::Mean;
    n.a = x.idx;
    n.needs_grad = at(x).needs_grad;
    double s = 0.0;
    const long m = at(x).val.numel();
    for (long i = 0; i < m; ++i) s += at(x).val[i];
    n.val = Tensor::scalar(s / static_cast<double>(m));
    return {push(std::move(n))};
}

Value Tape::dot(Value a, Value b) {
    const Tensor& av = at(a).val;
    const Tensor& bv = at(b).val;
    if (av.rank() != 1 || bv.rank() != 1 || av.numel() != bv.numel())
        throw std::invalid_argument("dot: needs two rank-1 tensors of equal length");
    Node n;
    n.op = Op::Dot;
    n.a = a.idx;
    n.b = b.idx;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = Tensor::scalar(kern::dot(av.data(), bv.data(), av.numel()));
    return {push(std::move(n))};
}

Value Tape::matmul_nt(Value a, Value b) {
    const Tensor& av = at(a).val;
    const Tensor& bv = at(b).val;
    if (av.rank() != 2 || bv.rank() != 2 || av.cols() != bv.cols())
        throw std::invalid_argument("matmul_nt: inner dimensions do not match");
    const long m = av.rows(), k = av.cols(), nn = bv.rows();
    Node n;
    n.op = Op::MatMulNT;
    n.a = a.idx;
    n.b = b.idx;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = Tensor({m, nn});
    n.aux = Tensor({k, nn});
    kern::transpose(bv.data(), n.aux.data(), nn, k);
    kern::gemm_nn(av.data(), n.aux.data(), n.val.data(), m, nn, k);
    return {push(std::move(n))};
}

Value Tape::gather_rowdot(Value t, Value b, std::vector<int> index_map) {
    const Tensor& tv = at(t).val;
    const Tensor& bv = at(b).val;
    if (tv.rank() != 2 || bv.rank() != 2 || tv.cols() != bv.cols())
        throw std::invalid_argument("gather_rowdot: column mismatch");
    if (static_cast<long>(index_map.size()) != tv.rows())
        throw std::invalid_argument("gather_rowdot: index map length mismatch");
    const long p = tv.cols();
    Node n;
    n.op = Op::GatherRowDot;
    n.a = t.idx;
    n.b = b.idx;
    n.needs_grad = at(t).needs_grad || at(b).needs_grad;
    n.val = Tensor({tv.rows()});
    for (long r = 0; r < tv.rows(); ++r) {
        const int s = index_map[static_cast<size_t>(r)];
        if (s < 0 || s >= bv.rows()) throw std::invalid_argument("gather_rowdot: index out of range");
        n.val[r] = kern::dot(tv.data() + r * p, bv.data() + s * p, p);
    }
    n.list = std::move(index_map);
    return {push(std::move(n))};
}

Value Tape::concat_rows(const std::vector<Value>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat_rows: empty input");
    const long cols = at(parts[0]).val.cols();
    long rows = 0;
    bool needs = false;
    for (Value v : parts) {
        if (at(v).val.cols() != cols) throw std::invalid_argument("concat_rows: column mismatch");
        rows += at(v).val.rows();
        needs = needs || at(v).needs_grad;
    }
    Node n;
    n.op = Op::ConcatRows;
    n.needs_grad = needs;
    n.val = Tensor({rows, cols});
    long r0 = 0;
    for (Value v : parts) {
        const Tensor& pv = at(v).val;
        std::copy(pv.data(), pv.data() + pv.numel(), n.val.data() + r0 * cols);
        r0 += pv.rows();
        n.list.push_back(v.idx);
    }
    return {push(std::move(n))};
}

Value Tape::mse_to(Value pred, Tensor target) {
    const Tensor& pv = at(pred).val;
    check_same_shape(pv, target, "mse_to");
    Node n;
    n.op = Op::MseTo;
    n.a = pred.idx;
    n.needs_grad = at(pred).needs_grad;
    double s = 0.0;
    for (long i = 0; i < pv.numel(); ++i) {
        const double d = pv[i] - target[i];
        s += d * d;
    }
    n.val = Tensor::scalar(s / static_cast<double>(pv.numel()));
    n.aux = std::move(target);
    return {push(std::move(n))};
}

Value Tape::bce_to(Value pred, Tensor target) {
    const Tensor& pv = at(pred).val;
    check_same_shape(pv, target, "bce_to");
    Node n;
    n.op = Op::BceTo;
    n.a = pred.idx;
    n.needs_grad = at(pred).needs_grad;
    double s = 0.0;
    for (long i = 0; i < pv.numel(); ++i) {
        const double p = clamp_prob(pv[i]);
        const double b = target[i];
        s -= b * std::log(p) + (1.0 - b) * std::log(1.0 - p);
    }
    n.val = Tensor::scalar(s / static_cast<double>(pv.numel()));
    n.aux = std::move(target);
    return {push(std::move(n))};
}

const Tensor& Tape::val(Value v) const { return at(v).val; }

double Tape::scalar_of(Value v) const {
    const Tensor& t = at(v).val;
    if (t.numel() != 1) throw std::invalid_argument("scalar_of: value is not a scalar");
    return t[0];
}

void Tape::backward(Value loss) {
    Node& top = at(loss);
    if (top.val.numel() != 1) throw std::invalid_argument("backward: loss must be scalar");

    for (Node& n : nodes_) {
        if (n.needs_grad) {
            n.grad = Tensor(std::vector<long>(n.val.shape()));
        }
    }
    if (!top.needs_grad)
        throw std::invalid_argument("backward: loss does not depend on any parameter");
    top.grad[0] = 1.0;

    for (int i = loss.idx; i >= 0; --i) {
        Node& n = nodes_[static_cast<size_t>(i)];
        if (!n.needs_grad) continue;
        const Tensor& g = n.grad;
        switch (n.op) {
        case Op::Leaf:
        case Op::Param:
            break;
        case Op::Linear: {
            Node& x = nodes_[static_cast<size_t>(n.a)];
            Node& w = nodes_[static_cast<size_t>(n.b)];
            const long rows = x.val.rows(), in = w.val.cols(), out = w.val.rows();
            if (x.needs_grad)
                kern::gemm_nn(g.data(), w.val.data(), x.grad.data(), rows, in, out, true);
            if (w.needs_grad)
                kern::gemm_tn_acc(g.data(), x.val.data(), w.grad.data(), rows, in, out);
            if (n.c >= 0) {
                Node& b = nodes_[static_cast<size_t>(n.c)];
                if (b.needs_grad)
                    for (long r = 0; r < rows; ++r)
                        for (long j = 0; j < out; ++j) b.grad[j] += g[r * out + j];
            }
            break;
        }
        case Op::CMul: {
            Node& x = nodes_[static_cast<size_t>(n.a)];
            if (x.needs_grad)
                for (long j = 0; j < g.numel(); ++j) x.grad[j] += g[j] * n.aux[j];
            break;
        }
        case Op::Add: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            Node& b = nodes_[static_cast<size_t>(n.b)];
            if (a.needs_grad)
                for (long j = 0; j < g.numel(); ++j) a.grad[j] += g[j];
            if (b.needs_grad)
                for (long j = 0; j < g.numel(); ++j) b.grad[j] += g[j];
            break;
        }
        case Op::Sub: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            Node& b = nodes_[static_cast<size_t>(n.b)];
            if (a.needs_grad)
                for (long j = 0; j < g.numel(); ++j) a.grad[j] += g[j];
            if (b.needs_grad)
                for (long j = 0; j < g.numel(); ++j) b.grad[j] -= g[j];
            break;
        }
        case Op::Mul: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            Node& b = nodes_[static_cast<size_t>(n.b)];
            if (a.needs_grad)
                for (long j = 0; j < g.numel(); ++j) a.grad[j] += g[j] * b.val[j];
            if (b.needs_grad)
                for (long j = 0; j < g.numel(); ++j) b.grad[j] += g[j] * a.val[j];
            break;
        }
        case Op::Scale: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            if (a.needs_grad)
                for (long j = 0; j < g.numel(); ++j) a.grad[j] += g[j] * n.k;
            break;
        }
        case Op::Tanh: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            if (a.needs_grad)
                for (long j = 0; j < g.numel(); ++j)
                    a.grad[j] += g[j] * (1.0 - n.val[j] * n.val[j]);
            break;
        }
        case Op::Sigmoid: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            if (a.needs_grad)
                for (long j = 0; j < g.numel(); ++j)
                    a.grad[j] += g[j] * n.val[j] * (1.0 - n.val[j]);
            break;
        }
        case Op::Square: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            if (a.needs_grad)
                for (long j = 0; j < g.numel(); ++j) a.grad[j] += g[j] * 2.0 * a.val[j];
            break;
        }
        case Op::Sum: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            if (a.needs_grad)
                for (long j = 0; j < a.grad.numel(); ++j) a.grad[j] += g[0];
            break;
        }
        case Op::Mean: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            if (a.needs_grad) {
                const double inv = g[0] / static_cast<double>(a.grad.numel());
                for (long j = 0; j < a.grad.numel(); ++j) a.grad[j] += inv;
            }
            break;
        }
        case Op::Dot: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            Node& b = nodes_[static_cast<size_t>(n.b)];
            if (a.needs_grad)
                for (long j = 0; j < a.grad.numel(); ++j) a.grad[j] += g[0] * b.val[j];
            if (b.needs_grad)
                for (long j = 0; j < b.grad.numel(); ++j) b.grad[j] += g[0] * a.val[j];
            break;
        }
        case Op::MatMulNT: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            Node& b = nodes_[static_cast<size_t>(n.b)];
            const long m = a.val.rows(), k = a.val.cols(), nn = b.val.rows();
            if (a.needs_grad)
                kern::gemm_nn(g.data(), b.val.data(), a.grad.data(), m, k, nn, true);
            if (b.needs_grad)
                kern::gemm_tn_acc(g.data(), a.val.data(), b.grad.data(), m, k, nn);
            break;
        }
        case Op::GatherRowDot: {
            Node& t = nodes_[static_cast<size_t>(n.a)];
            Node& b = nodes_[static_cast<size_t>(n.b)];
            const long p = t.val.cols();
            for (long r = 0; r < t.val.rows(); ++r) {
                const long s = n.list[static_cast<size_t>(r)];
                const double gr = g[r];
                if (t.needs_grad) {
                    double* tg = t.grad.data() + r * p;
                    const double* bd = b.val.data() + s * p;
                    for (long j = 0; j < p; ++j) tg[j] += gr * bd[j];
                }
                if (b.needs_grad) {
                    double* bg = b.grad.data() + s * p;
                    const double* td = t.val.data() + r * p;
                    for (long j = 0; j < p; ++j) bg[j] += gr * td[j];
                }
            }
            break;
        }
        case Op::ConcatRows: {
            long r0 = 0;
            const long cols = n.val.cols();
            for (int src : n.list) {
                Node& part = nodes_[static_cast<size_t>(src)];
                const long pr = part.val.rows();
                if (part.needs_grad)
                    for (long j = 0; j < pr * cols; ++j) part.grad[j] += g[r0 * cols + j];
                r0 += pr;
            }
            break;
        }
        case Op::MseTo: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            if (a.needs_grad) {
                const double c = 2.0 * g[0] / static_cast<double>(a.val.numel());
                for (long j = 0; j < a.val.numel(); ++j)
                    a.grad[j] += c * (a.val[j] - n.aux[j]);
            }
            break;
        }
        case Op::BceTo: {
            Node& a = nodes_[static_cast<size_t>(n.a)];
            if (a.needs_grad) {
                const double c = g[0] / static_cast<double>(a.val.numel());
                for (long j = 0; j < a.val.numel(); ++j) {
                    const double p = clamp_prob(a.val[j]);
                    a.grad[j] += c * (p - n.aux[j]) / (p * (1.0 - p));
                }
            }
            break;
        }
        }
    }
    ran_backward_ = true;
}

const Tensor& Tape::grad_of(Value v) const {
    const Node& n = at(v);
    if (!ran_backward_ || !n.needs_grad)
        throw std::logic_error("grad_of: no gradient available for this node");
    return n.grad;
}

void Tape::accumulate_param_grads(const std::vector<Parameter*>& params) const {
    if (!ran_backward_) throw std::logic_error("accumulate_param_grads: run backward first");
    for (Parameter* p : params) {
        for (const Node& n : nodes_) {
            if (n.op == Op::Param && n.bound == p) {
                std::vector<double>& g = p->value.grad();
                for (long j = 0; j < n.grad.numel(); ++j) g[static_cast<size_t>(j)] += n.grad[j];
            }
        }
    }
}

void Tape::reset() {
    nodes_.clear();
    ran_backward_ = false;
}

} // namespace oplearn
