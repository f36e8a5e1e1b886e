#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace affect {

// Dense row-major matrix. Small enough on purpose: the classifiers only need
// matvec/outer-product loops over contiguous rows.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    T& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    T operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<T> data() { return {data_.data(), data_.size()}; }
    std::span<const T> data() const { return {data_.data(), data_.size()}; }

    bool operator==(const Matrix&) const = default;

    template <typename U>
    Matrix<U> cast() const {
        Matrix<U> out(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = static_cast<U>(data_[i]);
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
    assert(a.size() == b.size());
    T s = T(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <typename T>
T dot(std::span<T> a, std::span<const T> b) {
    return dot(std::span<const T>(a), b);
}

template <typename T>
T dot(std::span<const T> a, std::span<T> b) {
    return dot(a, std::span<const T>(b));
}

template <typename T>
T dot(std::span<T> a, std::span<T> b) {
    return dot(std::span<const T>(a), std::span<const T>(b));
}

template <typename T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

template <typename T>
T squared_norm(std::span<const T> x) {
    T s = T(0);
    for (T v : x) s += v * v;
    return s;
}

template <typename T>
bool all_finite(std::span<const T> x) {
    for (T v : x) {
        if (!std::isfinite(static_cast<double>(v))) return false;
    }
    return true;
}

} // namespace affect
