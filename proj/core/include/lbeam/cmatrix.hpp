#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lbeam {

using cx = std::complex<double>;

// Dense column-ordered-agnostic complex matrix. Storage is row-major.
// Shape errors throw std::invalid_argument; out-of-range access throws
// std::out_of_range via at().
class CMatrix {
public:
    CMatrix() = default;

    CMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("CMatrix: negative dimension");
        data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), cx{0.0, 0.0});
    }

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = cx{1.0, 0.0};
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    cx& operator()(int r, int c) { return data_[idx(r, c)]; }
    const cx& operator()(int r, int c) const { return data_[idx(r, c)]; }

    cx& at(int r, int c) {
        check_range(r, c);
        return data_[idx(r, c)];
    }
    const cx& at(int r, int c) const {
        check_range(r, c);
        return data_[idx(r, c)];
    }

    cx* data() { return data_.data(); }
    const cx* data() const { return data_.data(); }

    cx* row_ptr(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
    const cx* row_ptr(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

    CMatrix adjoint() const;                      // conjugate transpose
    CMatrix transpose() const;
    CMatrix conj() const;
    CMatrix block(int r0, int c0, int nr, int nc) const;
    CMatrix leading_columns(int n) const { return block(0, 0, rows_, n); }
    std::vector<cx> column(int c) const;
    void set_column(int c, const std::vector<cx>& v);

    bool same_shape(const CMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    std::size_t idx(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
    }
    void check_range(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw std::out_of_range("CMatrix: index (" + std::to_string(r) + "," + std::to_string(c) +
                                    ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<cx> data_;
};

CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cx s, const CMatrix& a);
CMatrix operator*(double s, const CMatrix& a);
CMatrix& operator+=(CMatrix& a, const CMatrix& b);
CMatrix& operator-=(CMatrix& a, const CMatrix& b);

std::vector<cx> matvec(const CMatrix& a, const std::vector<cx>& x);

// tr(a), sum of squared magnitudes, and the Frobenius norm.
cx trace(const CMatrix& a);
double frobenius_norm_sq(const CMatrix& a);
double frobenius_norm(const CMatrix& a);

// a - b in Frobenius norm; shapes must match.
double frobenius_distance(const CMatrix& a, const CMatrix& b);

CMatrix diag_matrix(const std::vector<double>& d);
CMatrix diag_matrix(const std::vector<cx>& d);

bool all_finite(const CMatrix& a);

}  // namespace lbeam
