#include "lbeam/cmatrix.hpp"

#include <cmath>

namespace lbeam {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) +
                                    "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                    "x" + std::to_string(b.cols()) + ")");
}

}  // namespace

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

CMatrix CMatrix::transpose() const {
    CMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

CMatrix CMatrix::conj() const {
    CMatrix out(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out(r, c) = std::conj((*this)(r, c));
    return out;
}

CMatrix CMatrix::block(int r0, int c0, int nr, int nc) const {
    if (r0 < 0 || c0 < 0 || nr < 0 || nc < 0 || r0 + nr > rows_ || c0 + nc > cols_)
        throw std::out_of_range("CMatrix::block: window outside matrix");
    CMatrix out(nr, nc);
    for (int r = 0; r < nr; ++r)
        for (int c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
    return out;
}

std::vector<cx> CMatrix::column(int c) const {
    if (c < 0 || c >= cols_) throw std::out_of_range("CMatrix::column: index outside matrix");
    std::vector<cx> v(static_cast<std::size_t>(rows_));
    for (int r = 0; r < rows_; ++r) v[static_cast<std::size_t>(r)] = (*this)(r, c);
    return v;
}

void CMatrix::set_column(int c, const std::vector<cx>& v) {
    if (c < 0 || c >= cols_) throw std::out_of_range("CMatrix::set_column: index outside matrix");
    if (static_cast<int>(v.size()) != rows_)
        throw std::invalid_argument("CMatrix::set_column: length mismatch");
    for (int r = 0; r < rows_; ++r) (*this)(r, c) = v[static_cast<std::size_t>(r)];
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "operator+");
    CMatrix out = a;
    return out += b;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "operator-");
    CMatrix out = a;
    return out -= b;
}

CMatrix& operator+=(CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "operator+=");
    cx* pa = a.data();
    const cx* pb = b.data();
    const std::size_t n = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(a.cols());
    for (std::size_t i = 0; i < n; ++i) pa[i] += pb[i];
    return a;
}

CMatrix& operator-=(CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "operator-=");
    cx* pa = a.data();
    const cx* pb = b.data();
    const std::size_t n = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(a.cols());
    for (std::size_t i = 0; i < n; ++i) pa[i] -= pb[i];
    return a;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("operator*: inner dimensions disagree (" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + ")");
    CMatrix out(a.rows(), b.cols());
    // i-k-j order keeps the inner loop streaming over contiguous rows.
    for (int i = 0; i < a.rows(); ++i) {
        cx* orow = out.row_ptr(i);
        const cx* arow = a.row_ptr(i);
        for (int k = 0; k < a.cols(); ++k) {
            const cx aik = arow[k];
            if (aik == cx{0.0, 0.0}) continue;
            const cx* brow = b.row_ptr(k);
            for (int j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

CMatrix operator*(cx s, const CMatrix& a) {
    CMatrix out = a;
    cx* p = out.data();
    const std::size_t n = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(a.cols());
    for (std::size_t i = 0; i < n; ++i) p[i] *= s;
    return out;
}

CMatrix operator*(double s, const CMatrix& a) { return cx{s, 0.0} * a; }

std::vector<cx> matvec(const CMatrix& a, const std::vector<cx>& x) {
    if (a.cols() != static_cast<int>(x.size()))
        throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<cx> y(static_cast<std::size_t>(a.rows()), cx{0.0, 0.0});
    for (int i = 0; i < a.rows(); ++i) {
        const cx* arow = a.row_ptr(i);
        cx acc{0.0, 0.0};
        for (int k = 0; k < a.cols(); ++k) acc += arow[k] * x[static_cast<std::size_t>(k)];
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

cx trace(const CMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("trace: matrix not square");
    cx t{0.0, 0.0};
    for (int i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double frobenius_norm_sq(const CMatrix& a) {
    double s = 0.0;
    const cx* p = a.data();
    const std::size_t n = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(a.cols());
    for (std::size_t i = 0; i < n; ++i) s += std::norm(p[i]);
    return s;
}

double frobenius_norm(const CMatrix& a) { return std::sqrt(frobenius_norm_sq(a)); }

double frobenius_distance(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "frobenius_distance");
    double s = 0.0;
    const cx* pa = a.data();
    const cx* pb = b.data();
    const std::size_t n = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(a.cols());
    for (std::size_t i = 0; i < n; ++i) s += std::norm(pa[i] - pb[i]);
    return std::sqrt(s);
}

CMatrix diag_matrix(const std::vector<double>& d) {
    CMatrix out(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < out.rows(); ++i) out(i, i) = cx{d[static_cast<std::size_t>(i)], 0.0};
    return out;
}

CMatrix diag_matrix(const std::vector<cx>& d) {
    CMatrix out(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < out.rows(); ++i) out(i, i) = d[static_cast<std::size_t>(i)];
    return out;
}

bool all_finite(const CMatrix& a) {
    const cx* p = a.data();
    const std::size_t n = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(a.cols());
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(p[i].real()) || !std::isfinite(p[i].imag())) return false;
    return true;
}

}  // namespace lbeam
