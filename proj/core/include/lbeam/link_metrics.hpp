#pragma once

#include <stdexcept>
#include <vector>

#include "lbeam/channel.hpp"
#include "lbeam/cmatrix.hpp"
#include "lbeam/precoder.hpp"

namespace lbeam {

struct NonPositiveSinr : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The effective per-user matrix G H_k F_k failed its diagonality assertion —
// the supplied precoder does not belong to this user/channel.
struct NotDiagonalEffective : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Matched-filter receive matrix G = (H_k F_k)^H, L x M.
struct ReceiveFilter {
    int user = 0;
    CMatrix matrix;
};

ReceiveFilter matched_filter(const ChannelSet& cs, const Precoder& p);

// Per-stream power decomposition at user k's matched-filter output: desired
// signal |g_l H_k f_{k,l}|^2, co-channel interference from all other users'
// precoders, and noise sigma^2 ||g_l||^2.
struct StreamPowerTerms {
    std::vector<double> signal;
    std::vector<double> cci;
    std::vector<double> noise;
};

// precoders must hold one precoder per user, indexed by user. Asserts the
// effective own-user matrix is diagonal (throws NotDiagonalEffective).
StreamPowerTerms stream_power_terms(const ChannelSet& cs, const std::vector<Precoder>& precoders,
                                    int k);

// SINR_l = signal_l / (cci_l + noise_l); intra-user terms are excluded
// because the effective matrix is diagonal (asserted).
std::vector<double> exact_stream_sinr(const ChannelSet& cs, const std::vector<Precoder>& precoders,
                                      int k);

// CCI-negligible approximation: scale^2 * gain_l / sigma^2.
std::vector<double> approx_stream_sinr(const Precoder& p, double sigma2);

// Full antisymmetric margin table: entry (l, m) = 10 log10(sinr_l / sinr_m).
// Positive inter-stream margins (stronger over weaker) live above the
// diagonal when the SINRs descend. Throws NonPositiveSinr.
std::vector<std::vector<double>> stream_margins_db(const std::vector<double>& sinr);

// Gaussian-input achievable rate with the matched filter treating
// interference as noise: sum over users and streams of log2(1 + SINR_exact).
double sum_rate(const ChannelSet& cs, const std::vector<Precoder>& precoders);

// Bundled per-user report; margins_db is computed from the exact SINRs (the
// convention for simulation reports; validation suites build margin tables
// from approx_stream_sinr directly).
struct StreamSinrReport {
    int user = 0;
    std::vector<double> exact_sinr;
    std::vector<double> approx_sinr;
    std::vector<std::vector<double>> margins_db;
};

StreamSinrReport stream_sinr_report(const ChannelSet& cs, const std::vector<Precoder>& precoders,
                                    int k);

}  // namespace lbeam
