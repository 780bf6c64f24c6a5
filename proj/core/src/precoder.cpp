#include "lbeam/precoder.hpp"

#include <cmath>

#include "lbeam/linalg.hpp"

namespace lbeam {

const char* scheme_name(Scheme s) { return s == Scheme::Original ? "original" : "proposed"; }

std::optional<Scheme> parse_scheme(std::string_view name) {
    if (name == "original") return Scheme::Original;
    if (name == "proposed") return Scheme::Proposed;
    return std::nullopt;
}

std::pair<CMatrix, CMatrix> build_pair(const ChannelSet& cs, int k) {
    const CMatrix& h = cs.channel(k);
    CMatrix a = h.adjoint() * h;
    CMatrix hbar = leakage_channel(cs, k);
    CMatrix b = hbar.adjoint() * hbar;
    const double noise = static_cast<double>(cs.dims().rx_antennas) * cs.noise_variance() /
                         static_cast<double>(cs.dims().streams);
    for (int i = 0; i < b.rows(); ++i) b(i, i) += noise;
    return {std::move(a), std::move(b)};
}

GedDiagonalization ged_diagonalize(const CMatrix& a, const CMatrix& b) {
    if (!a.same_shape(b) || a.rows() != a.cols())
        throw std::invalid_argument("ged_diagonalize: pair must be square matrices of equal size");
    const CMatrix lb = cholesky_lower(b);
    const CMatrix w = invert_lower_triangular(lb);   // W = Lb^-1
    const CMatrix reduced = w * a * w.adjoint();     // W A W^H, Hermitian
    EigResult eig = hermitian_eig(reduced);
    clamp_hpsd_eigenvalues(eig.eigenvalues);

    GedDiagonalization out;
    out.transform = w.adjoint() * eig.eigenvectors;  // T = Lb^-H V, so T^H B T = I
    out.lambda = std::move(eig.eigenvalues);
    return out;
}

PairDiagonalization simultaneous_diagonalize(const CMatrix& a, const CMatrix& b) {
    if (!a.same_shape(b) || a.rows() != a.cols())
        throw std::invalid_argument("simultaneous_diagonalize: pair must be square matrices of equal size");
    const CMatrix c = a + b;
    const CMatrix lc = cholesky_lower(c);
    const CMatrix linv = invert_lower_triangular(lc);
    const CMatrix q = linv.adjoint();                // Q^H C Q = I
    const CMatrix reduced = linv * a * q;            // Q^H A Q, Hermitian PSD
    EigResult eig = hermitian_eig(reduced);
    clamp_hpsd_eigenvalues(eig.eigenvalues);

    PairDiagonalization out;
    out.transform = q * eig.eigenvectors;            // P = Q U
    out.signal_gains = std::move(eig.eigenvalues);
    out.complement_gains.resize(out.signal_gains.size());
    for (std::size_t i = 0; i < out.signal_gains.size(); ++i)
        out.complement_gains[i] = 1.0 - out.signal_gains[i];
    return out;
}

namespace {

// Extract the leading L columns and normalize to Tr(F F^H) = L.
Precoder assemble(Scheme scheme, int user, const CMatrix& transform,
                  const std::vector<double>& gains, int streams) {
    CMatrix cols = transform.leading_columns(streams);
    const double power = frobenius_norm_sq(cols);
    if (!(power > 0.0))
        throw DegenerateDenominator("precoder assembly: leading columns carry no power");
    const double scale = std::sqrt(static_cast<double>(streams) / power);

    Precoder p;
    p.scheme = scheme;
    p.user = user;
    p.matrix = scale * cols;
    p.scale = scale;
    p.stream_gains.assign(gains.begin(), gains.begin() + streams);
    return p;
}

}  // namespace

namespace detail {

Precoder original_precoder_from_pair(const CMatrix& a, const CMatrix& b, int user, int streams) {
    const GedDiagonalization ged = ged_diagonalize(a, b);
    return assemble(Scheme::Original, user, ged.transform, ged.lambda, streams);
}

Precoder proposed_precoder_from_pair(const CMatrix& a, const CMatrix& b, int user, int streams) {
    const PairDiagonalization pd = simultaneous_diagonalize(a, b);
    return assemble(Scheme::Proposed, user, pd.transform, pd.signal_gains, streams);
}

}  // namespace detail

Precoder original_precoder(const ChannelSet& cs, int k) {
    const auto [a, b] = build_pair(cs, k);
    return detail::original_precoder_from_pair(a, b, k, cs.dims().streams);
}

Precoder proposed_precoder(const ChannelSet& cs, int k) {
    const auto [a, b] = build_pair(cs, k);
    return detail::proposed_precoder_from_pair(a, b, k, cs.dims().streams);
}

Precoder make_precoder(const ChannelSet& cs, int k, Scheme scheme) {
    return scheme == Scheme::Original ? original_precoder(cs, k) : proposed_precoder(cs, k);
}

double slnr_value(const ChannelSet& cs, int k, const CMatrix& f) {
    if (f.rows() != cs.dims().tx_antennas)
        throw std::invalid_argument("slnr_value: precoder must have N rows");
    const auto [a, b] = build_pair(cs, k);
    // Tr(F^H A F) = sum_ij conj(F_ij) (A F)_ij, real for Hermitian A.
    const CMatrix af = a * f;
    const CMatrix bf = b * f;
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j) {
            num += (std::conj(f(i, j)) * af(i, j)).real();
            den += (std::conj(f(i, j)) * bf(i, j)).real();
        }
    if (!(den > 0.0))
        throw DegenerateDenominator("slnr_value: leakage-plus-noise power is not positive (zero precoder?)");
    return num / den;
}

}  // namespace lbeam
