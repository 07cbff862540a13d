#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace graphct {

/// Dense n-dimensional array of 64-bit reals, row-major.
///
/// Carrier type for sinograms, images, kernel weights and gradients.
/// Shapes are fixed at construction; the data buffer always holds exactly
/// product(shape) entries.
class Tensor {
public:
    Tensor() = default;

    /// Zero-initialized tensor of the given shape.
    explicit Tensor(std::vector<int> shape);
    Tensor(std::vector<int> shape, std::vector<double> data);

    static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<int> shape, double value);

    int rank() const { return static_cast<int>(shape_.size()); }
    const std::vector<int>& shape() const { return shape_; }
    int size(int axis) const { return shape_[static_cast<std::size_t>(axis)]; }
    std::size_t numel() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& operator()(int i) { return data_[static_cast<std::size_t>(i)]; }
    double operator()(int i) const { return data_[static_cast<std::size_t>(i)]; }
    double& operator()(int i, int j) { return data_[idx2(i, j)]; }
    double operator()(int i, int j) const { return data_[idx2(i, j)]; }
    double& operator()(int i, int j, int k) { return data_[idx3(i, j, k)]; }
    double operator()(int i, int j, int k) const { return data_[idx3(i, j, k)]; }
    double& operator()(int i, int j, int k, int l) { return data_[idx4(i, j, k, l)]; }
    double operator()(int i, int j, int k, int l) const { return data_[idx4(i, j, k, l)]; }

    void fill(double value);
    void set_zero() { fill(0.0); }

    /// this += alpha * other. Shapes must match.
    void add_scaled(const Tensor& other, double alpha);

    /// Copy of the same data under a new shape with equal element count.
    Tensor reshaped(std::vector<int> new_shape) const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    bool all_finite() const;

    double min_value() const;
    double max_value() const;

private:
    std::size_t idx2(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(shape_[1]) +
               static_cast<std::size_t>(j);
    }
    std::size_t idx3(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * static_cast<std::size_t>(shape_[1]) +
                static_cast<std::size_t>(j)) * static_cast<std::size_t>(shape_[2]) +
               static_cast<std::size_t>(k);
    }
    std::size_t idx4(int i, int j, int k, int l) const {
        return ((static_cast<std::size_t>(i) * static_cast<std::size_t>(shape_[1]) +
                 static_cast<std::size_t>(j)) * static_cast<std::size_t>(shape_[2]) +
                static_cast<std::size_t>(k)) * static_cast<std::size_t>(shape_[3]) +
               static_cast<std::size_t>(l);
    }

    std::vector<int> shape_;
    std::vector<double> data_;
};

std::size_t shape_numel(const std::vector<int>& shape);

} // namespace graphct
