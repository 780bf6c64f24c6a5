#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lbeam/cmatrix.hpp"
#include "lbeam/rng.hpp"

namespace lbeam {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A drawn channel failed the numerical full-rank assertion.
struct RankDeficientChannel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Downlink dimensions: N transmit antennas serving K users, each with M
// receive antennas and L data streams.
struct SystemDims {
    int tx_antennas = 8;  // N
    int rx_antennas = 3;  // M
    int users = 2;        // K
    int streams = 2;      // L

    // Throws std::invalid_argument naming the violated bound.
    void validate() const;

    bool operator==(const SystemDims&) const = default;
};

// One block-fading realization: the K per-user channels H_k (each M x N) and
// the noise variance sigma^2. Immutable after construction; the constructor
// asserts every H_k has full numerical rank M (smallest singular value above
// 1e-10 of the largest).
class ChannelSet {
public:
    ChannelSet(SystemDims dims, std::vector<CMatrix> channels, double noise_variance);

    const SystemDims& dims() const { return dims_; }
    double noise_variance() const { return noise_variance_; }

    // User indices are 0-based throughout the library.
    const CMatrix& channel(int k) const;

private:
    SystemDims dims_;
    std::vector<CMatrix> channels_;
    double noise_variance_ = 1.0;
};

// Draws every entry i.i.d. CN(0,1) (real/imag parts independent N(0,1/2)).
// Deterministic given the stream value; user k's matrix comes from the
// substream rng.split(k), so per-user draws are order-independent.
ChannelSet draw_channel_set(const SystemDims& dims, double noise_variance, const RngStream& rng);

// Leakage concatenation: vertical stack of all H_i with i != k, ascending i;
// shape (K-1)M x N. Throws std::out_of_range for a bad user index.
CMatrix leakage_channel(const ChannelSet& cs, int k);

// The SLNR denominator's noise contribution, read as (M sigma^2 / L) * I_N.
CMatrix noise_term(const ChannelSet& cs);

// Regression-fixture serialization: dims, noise variance, and per-user
// channel entries as [re, im] pairs.
void save_channel_set_json(const ChannelSet& cs, const std::string& path);
ChannelSet load_channel_set_json(const std::string& path);

}  // namespace lbeam
