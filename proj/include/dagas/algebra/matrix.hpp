#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "dagas/algebra/scalar.hpp"

namespace dagas {

// Dense row-major matrix over a single scalar mode.
template <class S>
class Matrix {
public:
    using value_type = S;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S{}) {}
    Matrix(std::size_t rows, std::size_t cols, const S& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<S>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (auto& row : init) {
            if (row.size() != cols_) throw DimensionError("ragged matrix literal");
            for (auto& v : row) data_.push_back(v);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }
    static Matrix row_vector(const std::vector<S>& v) {
        Matrix m(1, v.size());
        m.data_ = v;
        return m;
    }
    static Matrix column_vector(const std::vector<S>& v) {
        Matrix m(v.size(), 1);
        m.data_ = v;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool square() const { return rows_ == cols_; }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const S& at(std::size_t i, std::size_t j) const {
        if (i >= rows_ || j >= cols_) throw DimensionError("index out of range");
        return data_[i * cols_ + j];
    }
    const std::vector<S>& data() const { return data_; }
    std::vector<S>& data() { return data_; }

    Matrix& operator+=(const Matrix& o) {
        same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(const S& s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a) {
        for (auto& v : a.data_) v = -v;
        return a;
    }
    friend Matrix operator*(const S& s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, const S& s) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw DimensionError("product of " + a.shape() + " and " + b.shape());
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& x = a(i, k);
                if (is_structural_zero(x)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += x * b(k, j);
            }
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
        Matrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<S> data_;

    void same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionError("shape mismatch " + shape() + " vs " + o.shape());
    }
    static bool is_structural_zero(const S& x) {
        if constexpr (is_exact_v<S>)
            return is_zero(x);
        else
            return x == S{};
    }
};

// Block layout A ⊗ B = [A(i,j) B].
template <class S>
Matrix<S> kron(const Matrix<S>& a, const Matrix<S>& b) {
    Matrix<S> r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const S& x = a(i, j);
            if (is_zero(x)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
        }
    return r;
}

template <class S>
S trace(const Matrix<S>& a) {
    if (!a.square()) throw DimensionError("trace of non-square " + a.shape());
    S t{};
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

template <class S>
Matrix<S> matrix_power(const Matrix<S>& a, unsigned k) {
    if (!a.square()) throw DimensionError("power of non-square " + a.shape());
    Matrix<S> r = Matrix<S>::identity(a.rows());
    Matrix<S> base = a;
    while (k) {
        if (k & 1u) r = r * base;
        k >>= 1u;
        if (k) base = base * base;
    }
    return r;
}

template <class S>
double max_abs(const Matrix<S>& a) {
    double m = 0;
    for (auto& v : a.data()) m = std::max(m, magnitude(v));
    return m;
}

template <class S>
double max_abs_diff(const Matrix<S>& a, const Matrix<S>& b) {
    return max_abs(Matrix<S>(a - b));
}

template <class S>
bool all_zero(const Matrix<S>& a, double tol = 0) {
    for (auto& v : a.data())
        if (!is_zero(v, tol)) return false;
    return true;
}

template <class S>
bool approx_equal(const Matrix<S>& a, const Matrix<S>& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    if constexpr (is_exact_v<S>)
        return a == b;
    else
        return max_abs_diff(a, b) <= tol;
}

template <class S>
Matrix<S> sum(const std::vector<Matrix<S>>& family) {
    if (family.empty()) throw DimensionError("empty family");
    Matrix<S> r = family.front();
    for (std::size_t k = 1; k < family.size(); ++k) r += family[k];
    return r;
}

// Entrywise conversion between modes (e.g. exact -> complex float).
template <class T, class S, class F>
Matrix<T> map_entries(const Matrix<S>& a, F&& f) {
    Matrix<T> r(a.rows(), a.cols());
    for (std::size_t k = 0; k < a.size(); ++k) r.data()[k] = f(a.data()[k]);
    return r;
}

template <class S>
Matrix<ComplexFloat> to_complex(const Matrix<S>& a) {
    return map_entries<ComplexFloat>(a, [](const S& v) { return scalar_traits<S>::to_complex(v); });
}

} // namespace dagas
