#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lbeam/channel.hpp"
#include "lbeam/precoder.hpp"
#include "lbeam/rng.hpp"

namespace lbeam {

struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct TargetNotBracketed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    SystemDims dims{};
    std::vector<double> snr_grid_db = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24};
    std::vector<Scheme> schemes = {Scheme::Original, Scheme::Proposed};
    std::uint64_t max_trials = 1'000'000;
    std::uint64_t min_bit_errors = 200;
    std::uint64_t master_seed = 1;

    bool operator==(const SimConfig&) const = default;

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

struct BerPoint {
    double snr_db = 0.0;
    Scheme scheme = Scheme::Original;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_simulated = 0;
    double ber = 0.0;
    double sum_rate_mean = 0.0;
    double sum_rate_stderr = 0.0;
    std::uint64_t trials = 0;
    bool resolved = false;  // reached min_bit_errors before the trial cap
};

// Transmit SNR convention: SNR = L / sigma^2, i.e. sigma^2 = L / 10^(dB/10).
double noise_variance_for_snr_db(int streams, double snr_db);

// Gray-mapped unit-energy QPSK: bit pair (b0, b1) -> ((1-2 b0) + j (1-2 b1))/sqrt(2).
// One symbol per consecutive bit pair; odd-length input throws LengthMismatch.
std::vector<cx> modulate_qpsk(const std::vector<int>& bits);

// One vector-symbol transmission through cs under the given scheme: draws one
// QPSK symbol vector per user and per-user noise from rng, forms
// x = sum_k F_k s_k, detects per stream by quadrant decision at the
// matched-filter output, and returns per-user bit error counts. All
// randomness comes from rng in a scheme-independent order, so calling with
// stream copies yields paired draws across schemes.
std::vector<std::uint64_t> simulate_trial(const ChannelSet& cs, Scheme scheme, RngStream& rng);

// Full BER/sum-rate sweep over the SNR grid. Each trial draws a fresh
// channel realization (block fading); per point, trials run until every
// scheme has at least min_bit_errors errors or max_trials is reached
// (checked at batch boundaries). Both schemes see identical channel, symbol,
// and noise draws (paired comparison). Results are bit-identical for any
// worker count: trial t's randomness is addressed by substream, and batch
// results are reduced in trial order. workers = 0 resolves from the
// LEAKAGE_BEAM_THREADS environment variable, then hardware concurrency.
std::vector<BerPoint> run_sweep(const SimConfig& cfg, int workers = 0);

// Linear interpolation of SNR against log10(BER) along one scheme's curve
// (ascending SNR). An exact BER hit returns that grid SNR; otherwise the
// first bracketing segment interpolates. Throws TargetNotBracketed.
double interpolate_snr_at_ber(const std::vector<BerPoint>& curve, double target_ber);

}  // namespace lbeam
