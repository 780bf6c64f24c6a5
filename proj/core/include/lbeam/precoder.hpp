#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lbeam/channel.hpp"
#include "lbeam/cmatrix.hpp"

namespace lbeam {

enum class Scheme { Original, Proposed };

const char* scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

struct DegenerateDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Joint diagonalization of a pair (A, B) by the generalized eigendecomposition
// A t = lambda B t: transform T (N x N, invertible) with T^H A T = diag(lambda)
// and T^H B T = I; lambda sorted descending.
struct GedDiagonalization {
    CMatrix transform;           // T
    std::vector<double> lambda;  // descending, >= 0
};

// General-form simultaneous diagonalization: invertible P with
// P^H A P = diag(signal_gains) and P^H B P = diag(complement_gains), where
// signal_gains[i] + complement_gains[i] = 1 and signal_gains descend.
struct PairDiagonalization {
    CMatrix transform;                    // P
    std::vector<double> signal_gains;     // theta, descending in [0, 1)
    std::vector<double> complement_gains; // omega = 1 - theta, ascending
};

// One user's transmit precoder: N x L matrix normalized to Tr(F F^H) = L,
// its normalization scale (rho or gamma), and the per-stream effective gains
// (leading lambdas for the original scheme, leading thetas for the proposed).
struct Precoder {
    Scheme scheme = Scheme::Original;
    int user = 0;
    CMatrix matrix;  // N x L
    double scale = 1.0;
    std::vector<double> stream_gains;
};

// The SLNR pair for user k: A = H_k^H H_k (signal Gram, HPSD of rank M) and
// B = (M sigma^2 / L) I + Hbar_k^H Hbar_k (leakage-plus-noise Gram, HPD).
std::pair<CMatrix, CMatrix> build_pair(const ChannelSet& cs, int k);

// GED via Cholesky reduction: B = Lb Lb^H, eigendecompose Lb^-1 A Lb^-H,
// back-transform eigenvectors by Lb^-H so that T^H B T = I holds exactly.
GedDiagonalization ged_diagonalize(const CMatrix& a, const CMatrix& b);

// General-form simultaneous diagonalization of (A, B) with A HPSD, B HPD:
// C = A + B; C = Lc Lc^H; Q = (Lc^-1)^H; eigendecompose Q^H A Q = U diag(theta) U^H;
// P = Q U; complement gains are 1 - theta.
PairDiagonalization simultaneous_diagonalize(const CMatrix& a, const CMatrix& b);

// Leading-L-columns precoders, normalized to the transmit power constraint.
Precoder original_precoder(const ChannelSet& cs, int k);
Precoder proposed_precoder(const ChannelSet& cs, int k);
Precoder make_precoder(const ChannelSet& cs, int k, Scheme scheme);

// Tr(F^H A F) / Tr(F^H B F) for user k's pair; DegenerateDenominator when the
// denominator is not positive (possible only for a zero F).
double slnr_value(const ChannelSet& cs, int k, const CMatrix& f);

namespace detail {
// Pair-level workhorses shared by the public per-user operations and the
// Monte-Carlo hot path (which reuses one build_pair result across schemes).
Precoder original_precoder_from_pair(const CMatrix& a, const CMatrix& b, int user, int streams);
Precoder proposed_precoder_from_pair(const CMatrix& a, const CMatrix& b, int user, int streams);
}  // namespace detail

}  // namespace lbeam
