#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace oplearn {

// Dense rank-1/2 array of 64-bit floats, row-major, with an optional
// gradient buffer of the same shape.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<long> shape);

    static Tensor zeros(std::vector<long> shape);
    static Tensor full(std::vector<long> shape, double value);
    static Tensor scalar(double value);
    static Tensor from_vector(std::vector<double> values);
    static Tensor from_matrix(long rows, long cols, std::vector<double> values);
    static Tensor identity(long n);

    long rank() const { return static_cast<long>(shape_.size()); }
    const std::vector<long>& shape() const { return shape_; }
    long numel() const { return static_cast<long>(data_.size()); }
    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    // rank-2 accessors; rank-1 tensors behave as a single row
    long rows() const;
    long cols() const;

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](long i) { return data_[static_cast<size_t>(i)]; }
    double operator[](long i) const { return data_[static_cast<size_t>(i)]; }
    double& at(long i, long j) { return data_[static_cast<size_t>(i * cols() + j)]; }
    double at(long i, long j) const { return data_[static_cast<size_t>(i * cols() + j)]; }

    // gradient slot; absent until first touched
    bool has_grad() const { return !grad_.empty(); }
    std::vector<double>& grad();
    const std::vector<double>& grad() const { return grad_; }
    void clear_grad();

    bool all_finite() const;
    std::string shape_string() const;

private:
    std::vector<long> shape_;
    std::vector<double> data_;
    std::vector<double> grad_;
};

// Squared Euclidean norm of all entries.
double sum_of_squares(const Tensor& t);

} // namespace oplearn
