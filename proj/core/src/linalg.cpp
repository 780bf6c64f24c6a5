#include "lbeam/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lbeam {

namespace {

constexpr int kMaxSweeps = 30;
constexpr double kConvergenceRtol = 1e-12;

double offdiag_norm(const CMatrix& m) {
    double s = 0.0;
    for (int p = 0; p < m.rows(); ++p)
        for (int q = p + 1; q < m.cols(); ++q) s += std::norm(m(p, q));
    return std::sqrt(2.0 * s);
}

// One complex Jacobi rotation annihilating m(p,q); v accumulates the rotations.
void rotate(CMatrix& m, CMatrix& v, int p, int q) {
    const cx apq = m(p, q);
    const double absb = std::abs(apq);
    const cx ph = apq / absb;
    const double tau = (m(q, q).real() - m(p, p).real()) / (2.0 * absb);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cx s_ph = s * ph;
    const cx s_phc = s * std::conj(ph);

    const int n = m.rows();
    for (int r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        const cx mrp = m(r, p);
        const cx mrq = m(r, q);
        m(r, p) = c * mrp - s_phc * mrq;
        m(r, q) = s_ph * mrp + c * mrq;
        m(p, r) = std::conj(m(r, p));
        m(q, r) = std::conj(m(r, q));
    }
    const double app = m(p, p).real();
    const double aqq = m(q, q).real();
    m(p, p) = cx{app - t * absb, 0.0};
    m(q, q) = cx{aqq + t * absb, 0.0};
    m(p, q) = cx{0.0, 0.0};
    m(q, p) = cx{0.0, 0.0};

    for (int r = 0; r < n; ++r) {
        const cx vrp = v(r, p);
        const cx vrq = v(r, q);
        v(r, p) = c * vrp - s_phc * vrq;
        v(r, q) = s_ph * vrp + c * vrq;
    }
}

void fix_column_phases(CMatrix& v) {
    for (int j = 0; j < v.cols(); ++j) {
        int best = 0;
        double best_mag = -1.0;
        for (int r = 0; r < v.rows(); ++r) {
            const double mag = std::abs(v(r, j));
            if (mag > best_mag) {
                best_mag = mag;
                best = r;
            }
        }
        if (best_mag <= 0.0) continue;
        const cx ph = v(best, j) / best_mag;
        const cx scale = std::conj(ph);
        for (int r = 0; r < v.rows(); ++r) v(r, j) *= scale;
        v(best, j) = cx{std::abs(v(best, j)), 0.0};
    }
}

}  // namespace

bool is_hermitian(const CMatrix& a, double rtol) {
    if (a.rows() != a.cols()) return false;
    double max_mag = 0.0;
    double max_asym = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = i; j < a.cols(); ++j) {
            max_mag = std::max({max_mag, std::abs(a(i, j)), std::abs(a(j, i))});
            max_asym = std::max(max_asym, std::abs(a(i, j) - std::conj(a(j, i))));
        }
    }
    return max_asym <= rtol * max_mag;
}

EigResult hermitian_eig(const CMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eig: matrix not square");
    if (!is_hermitian(a, 1e-10)) throw std::invalid_argument("hermitian_eig: matrix not Hermitian");
    const int n = a.rows();

    // Work on the exactly Hermitian average so representational asymmetry in
    // the last bits cannot leak into the rotations.
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));

    CMatrix v = CMatrix::identity(n);
    const double tol = kConvergenceRtol * frobenius_norm(m);
    // Skipping rotations this small cannot hold a sweep above the threshold.
    const double skip = n > 1 ? tol / (2.0 * n) : 0.0;

    bool converged = (n == 1);
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        if (offdiag_norm(m) <= tol) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q)
                if (std::abs(m(p, q)) > skip) rotate(m, v, p, q);
    }
    if (!converged && offdiag_norm(m) > tol)
        throw NoConvergence("hermitian_eig: no convergence in " + std::to_string(kMaxSweeps) + " sweeps");

    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = m(i, i).real();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return ev[static_cast<std::size_t>(i)] > ev[static_cast<std::size_t>(j)];
    });

    EigResult out;
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    out.eigenvectors = CMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        out.eigenvalues[static_cast<std::size_t>(j)] = ev[static_cast<std::size_t>(src)];
        for (int r = 0; r < n; ++r) out.eigenvectors(r, j) = v(r, src);
    }
    fix_column_phases(out.eigenvectors);
    return out;
}

CMatrix cholesky_lower(const CMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky_lower: matrix not square");
    if (!is_hermitian(a, 1e-10)) throw std::invalid_argument("cholesky_lower: matrix not Hermitian");
    const int n = a.rows();
    const double tr = trace(a).real();
    const double pivot_floor = 1e-12 * std::max(tr, 0.0) / std::max(n, 1);

    CMatrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (d <= pivot_floor)
            throw NotPositiveDefinite("cholesky_lower: pivot " + std::to_string(d) + " at column " +
                                      std::to_string(j) + " is at or below the floor " +
                                      std::to_string(pivot_floor));
        const double djj = std::sqrt(d);
        l(j, j) = cx{djj, 0.0};
        for (int i = j + 1; i < n; ++i) {
            cx s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / djj;
        }
    }
    return l;
}

CMatrix invert_lower_triangular(const CMatrix& l) {
    if (l.rows() != l.cols()) throw std::invalid_argument("invert_lower_triangular: matrix not square");
    const int n = l.rows();
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(l(i, i)));
    for (int i = 0; i < n; ++i)
        if (std::abs(l(i, i)) < 1e-14 * max_diag || max_diag == 0.0)
            throw SingularTriangular("invert_lower_triangular: diagonal entry " + std::to_string(i) +
                                     " is negligible");

    CMatrix x(n, n);
    for (int j = 0; j < n; ++j) {
        x(j, j) = cx{1.0, 0.0} / l(j, j);
        for (int i = j + 1; i < n; ++i) {
            cx s{0.0, 0.0};
            for (int k = j; k < i; ++k) s += l(i, k) * x(k, j);
            x(i, j) = -s / l(i, i);
        }
    }
    return x;
}

void clamp_hpsd_eigenvalues(std::vector<double>& eigenvalues, double rel_tol) {
    double lam_max = 0.0;
    for (double w : eigenvalues) lam_max = std::max(lam_max, w);
    const double floor = rel_tol * lam_max;
    for (double& w : eigenvalues) {
        if (w < 0.0) {
            if (-w <= floor)
                w = 0.0;
            else
                throw NotPositiveSemidefinite("clamp_hpsd_eigenvalues: eigenvalue " + std::to_string(w) +
                                              " is beyond roundoff of a PSD spectrum");
        }
    }
}

}  // namespace lbeam
