#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "liespec/errors.hpp"
#include "liespec/scalar.hpp"

namespace liespec {

/// Dense row-major matrix over one scalar backend.
template <ScalarBackend S>
class Matrix {
public:
    using value_type = S;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, scalar_traits<S>::zero()) {}

    Matrix(std::initializer_list<std::initializer_list<S>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw ShapeMismatch("ragged initializer list");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = scalar_traits<S>::one();
        return m;
    }
    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<S>& data() const { return data_; }
    std::vector<S>& data() { return data_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.require_same_shape(b, "operator+");
        Matrix out(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) out.data_[k] = a.data_[k] + b.data_[k];
        return out;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.require_same_shape(b, "operator-");
        Matrix out(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) out.data_[k] = a.data_[k] - b.data_[k];
        return out;
    }
    friend Matrix operator-(const Matrix& a) {
        Matrix out(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) out.data_[k] = -a.data_[k];
        return out;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw ShapeMismatch("operator*: " + a.shape_str() + " times " + b.shape_str());
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S aik = a(i, k);
                if (scalar_traits<S>::is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }
    friend Matrix operator*(const S& s, const Matrix& a) {
        Matrix out(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) out.data_[k] = s * a.data_[k];
        return out;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// Conjugate transpose.
    Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(j, i) = scalar_traits<S>::conj((*this)(i, j));
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, scalar_traits<S>::abs(v));
        return m;
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(),
                           [](const S& v) { return scalar_traits<S>::is_finite(v); });
    }

    bool is_square() const { return rows_ == cols_; }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    void require_same_shape(const Matrix& o, const char* what) const {
        if (!same_shape(o))
            throw ShapeMismatch(std::string(what) + ": " + shape_str() + " vs " + o.shape_str());
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<S> data_;
};

using MatrixXcd = Matrix<Complexd>;
using MatrixXgq = Matrix<GaussianRational>;

/// AB - BA for square matrices of one shape.
template <ScalarBackend S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
    if (!a.is_square() || !b.is_square() || !a.same_shape(b))
        throw ShapeMismatch("commutator: need equal square shapes, got " + a.shape_str() +
                            " and " + b.shape_str());
    return a * b - b * a;
}

template <ScalarBackend S>
Matrix<S> diagonal_matrix(const std::vector<S>& diag) {
    Matrix<S> m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

/// Flattens row-major; used to treat operator families as vectors in C^(m^2).
template <ScalarBackend S>
std::vector<S> vectorize(const Matrix<S>& m) {
    return m.data();
}

template <ScalarBackend S>
Matrix<S> convert_matrix(const Matrix<GaussianRational>& m)
    requires std::is_same_v<S, Complexd>
{
    Matrix<Complexd> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_complexd(m(i, j));
    return out;
}

inline Matrix<Complexd> to_float_matrix(const Matrix<GaussianRational>& m) {
    return convert_matrix<Complexd>(m);
}
inline const Matrix<Complexd>& to_float_matrix(const Matrix<Complexd>& m) { return m; }

}  // namespace liespec
