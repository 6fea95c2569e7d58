#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace prymtk {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Dense matrix with arbitrary-precision entries.  Row-major storage.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("Matrix: entry count mismatch");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix p(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
            }
        return p;
    }

    Matrix operator+(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch in sum");
        Matrix s(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] + o.data_[i];
        return s;
    }
    Matrix operator-(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch in difference");
        Matrix s(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] - o.data_[i];
        return s;
    }
    Matrix operator-() const {
        Matrix s(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = -data_[i];
        return s;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    bool is_zero() const {
        for (const auto& e : data_)
            if (e != 0) return false;
        return true;
    }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }

    std::string str() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

RatMatrix to_rational(const IntMatrix& a);
/// Fails if any entry has a nontrivial denominator.
IntMatrix to_integer(const RatMatrix& a);

struct SNFResult {
    IntMatrix u;  // unimodular, rows x rows
    IntMatrix s;  // diagonal, divisibility chain, nonnegative
    IntMatrix v;  // unimodular, cols x cols
};

/// U*A*V = S with S in Smith normal form.
SNFResult smith_normal_form(const IntMatrix& a);

/// Diagonal entries of the SNF that exceed 1 (the invariant factors of coker A).
std::vector<Int> invariant_factors(const IntMatrix& a);

struct HNFResult {
    IntMatrix h;  // row echelon, U*A = H
    IntMatrix u;  // unimodular
};

/// Row-style Hermite normal form: U*A = H with H in upper echelon form,
/// pivots positive, entries above a pivot reduced mod the pivot.
HNFResult hermite_normal_form(const IntMatrix& a);

struct Inertia {
    std::size_t n_plus = 0, n_minus = 0, n_zero = 0;
};

/// Signature of a symmetric integer matrix by exact rational symmetric
/// reduction; zero diagonals are handled with hyperbolic 2x2 pivots.
Inertia inertia(const IntMatrix& g);

/// Rank over Q.
std::size_t rank(const IntMatrix& a);

Int determinant(const IntMatrix& a);
Rat determinant(const RatMatrix& a);

/// Basis of the primitive closure of the row span of B inside Z^n.
/// Rows of B must be independent.
IntMatrix saturate(const IntMatrix& b);

/// Index of the row span of B inside its saturation.
Int saturation_index(const IntMatrix& b);

/// Saturated basis of the integer kernel {x : A*x = 0}, rows = basis vectors.
IntMatrix integer_kernel(const IntMatrix& a);

/// Exact solution of A*x = b over Q, or nothing if inconsistent.
/// b and the result are column vectors.
std::optional<std::vector<Rat>> rational_solve(const IntMatrix& a, const std::vector<Rat>& b);
std::optional<RatMatrix> rational_solve(const RatMatrix& a, const RatMatrix& b);

/// Integer solution of A*y = b, or nothing if none exists over Z.
std::optional<std::vector<Int>> integer_solve(const IntMatrix& a, const std::vector<Int>& b);

RatMatrix rational_inverse(const RatMatrix& a);
IntMatrix unimodular_inverse(const IntMatrix& u);

}  // namespace prymtk
