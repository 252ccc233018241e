#pragma once

#include <cmath>

#include "hyerslab/types.hpp"

namespace hyerslab {

/// Dense complex matrix, row-major. Small sizes only; plain O(n^3) kernels.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, cx(0, 0)) {}

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = cx(1, 0);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    cx& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const cx& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    const std::vector<cx>& data() const { return data_; }

    CVector apply(const CVector& x) const {
        if (static_cast<int>(x.size()) != cols_)
            throw DimensionMismatch("CMatrix::apply: vector length != cols");
        CVector y(rows_, cx(0, 0));
        for (int r = 0; r < rows_; ++r) {
            cx s = 0;
            const cx* row = &data_[static_cast<size_t>(r) * cols_];
            for (int c = 0; c < cols_; ++c) s += row[c] * x[c];
            y[r] = s;
        }
        return y;
    }

    CMatrix adjoint() const {
        CMatrix m(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    CMatrix operator*(const CMatrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("CMatrix::operator*: inner dims differ");
        CMatrix m(rows_, o.cols_);
        for (int r = 0; r < rows_; ++r)
            for (int k = 0; k < cols_; ++k) {
                cx a = (*this)(r, k);
                if (a == cx(0, 0)) continue;
                for (int c = 0; c < o.cols_; ++c) m(r, c) += a * o(k, c);
            }
        return m;
    }

    CMatrix operator+(const CMatrix& o) const {
        CMatrix m = *this;
        for (size_t i = 0; i < data_.size(); ++i) m.data_[i] += o.data_[i];
        return m;
    }

    CMatrix operator-(const CMatrix& o) const {
        CMatrix m = *this;
        for (size_t i = 0; i < data_.size(); ++i) m.data_[i] -= o.data_[i];
        return m;
    }

    CMatrix scaled(cx s) const {
        CMatrix m = *this;
        for (cx& z : m.data_) z *= s;
        return m;
    }

    CVector column(int c) const {
        CVector v(rows_);
        for (int r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
        return v;
    }

    void set_column(int c, const CVector& v) {
        for (int r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
    }

    CVector flatten() const { return data_; }

    static CMatrix from_flat(int rows, int cols, const CVector& flat) {
        CMatrix m(rows, cols);
        m.data_ = flat;
        return m;
    }

    double frobenius() const {
        double s = 0;
        for (const cx& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0;
        for (const cx& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    bool operator==(const CMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<cx> data_;
};

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    return (a - b).max_abs();
}

}  // namespace hyerslab
