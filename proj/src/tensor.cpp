#include "oplearn/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oplearn {

namespace {
long shape_numel(const std::vector<long>& shape) {
    long n = 1;
    for (long d : shape) {
        if (d <= 0) throw std::invalid_argument("tensor dimension must be positive");
        n *= d;
    }
    return n;
}
} // namespace

Tensor::Tensor(std::vector<long> shape) : shape_(std::move(shape)) {
    if (shape_.size() > 2) throw std::invalid_argument("tensor rank must be 1 or 2");
    data_.assign(static_cast<size_t>(shape_numel(shape_)), 0.0);
}

Tensor Tensor::zeros(std::vector<long> shape) { return Tensor(std::move(shape)); }

Tensor Tensor::full(std::vector<long> shape, double value) {
    Tensor t(std::move(shape));
    for (double& x : t.data_) x = value;
    return t;
}

Tensor Tensor::scalar(double value) {
    Tensor t({1});
    t.data_[0] = value;
    return t;
}

Tensor Tensor::from_vector(std::vector<double> values) {
    Tensor t;
    t.shape_ = {static_cast<long>(values.size())};
    t.data_ = std::move(values);
    if (t.data_.empty()) throw std::invalid_argument("empty tensor");
    return t;
}

Tensor Tensor::from_matrix(long rows, long cols, std::vector<double> values) {
    if (static_cast<long>(values.size()) != rows * cols)
        throw std::invalid_argument("matrix data size does not match shape");
    Tensor t;
    t.shape_ = {rows, cols};
    t.data_ = std::move(values);
    return t;
}

Tensor Tensor::identity(long n) {
    Tensor t({n, n});
    for (long i = 0; i < n; ++i) t.at(i, i) = 1.0;
    return t;
}

long Tensor::rows() const { return shape_.size() == 2 ? shape_[0] : 1; }

long Tensor::cols() const {
    if (shape_.empty()) return 0;
    return shape_.size() == 2 ? shape_[1] : shape_[0];
}

std::vector<double>& Tensor::grad() {
    if (grad_.empty()) grad_.assign(data_.size(), 0.0);
    return grad_;
}

void Tensor::clear_grad() { grad_.clear(); }

bool Tensor::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

std::string Tensor::shape_string() const {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < shape_.size(); ++i) {
        if (i) os << 'x';
        os << shape_[i];
    }
    os << ']';
    return os.str();
}

double sum_of_squares(const Tensor& t) {
    double s = 0.0;
    for (double x : t.values()) s += x * x;
    return s;
}

} // namespace oplearn
