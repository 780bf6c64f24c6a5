#include "lbeam/ber_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <utility>

#include "lbeam/link_metrics.hpp"

namespace lbeam {

namespace {

// Substream address tags: channel draws and data (symbol/noise) draws live in
// disjoint subtrees of the master stream, each further split by grid point,
// trial, and (for channels) user.
constexpr std::uint64_t kChannelTag = 0x5EEDC4A1;
constexpr std::uint64_t kDataTag = 0x5EEDDA7A;

constexpr std::uint64_t kFirstBatch = 512;
constexpr std::uint64_t kMaxBatch = 65536;
constexpr int kMaxSchemes = 2;

int resolve_worker_count(int requested) {
    if (requested > 0) return std::min(requested, 256);
    if (const char* env = std::getenv("LEAKAGE_BEAM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct TrialDraws {
    std::vector<std::vector<int>> bits;   // [user][2L]
    std::vector<std::vector<cx>> noise;   // [user][M], already scaled by sigma
};

// Scheme-independent draw order: all users' bits, then all users' noise.
TrialDraws draw_trial_randomness(const SystemDims& dims, double sigma2, RngStream& rng) {
    TrialDraws d;
    d.bits.resize(static_cast<std::size_t>(dims.users));
    d.noise.resize(static_cast<std::size_t>(dims.users));
    for (int u = 0; u < dims.users; ++u) {
        auto& bits = d.bits[static_cast<std::size_t>(u)];
        bits.resize(static_cast<std::size_t>(2 * dims.streams));
        for (int& b : bits) b = static_cast<int>(rng.next_u64() & 1u);
    }
    const double sigma = std::sqrt(sigma2);
    for (int u = 0; u < dims.users; ++u) {
        auto& noise = d.noise[static_cast<std::size_t>(u)];
        noise.resize(static_cast<std::size_t>(dims.rx_antennas));
        for (cx& n : noise) n = sigma * rng.next_complex_gaussian();
    }
    return d;
}

// Detection under one scheme's precoders on fixed draws.
std::vector<std::uint64_t> detect_errors(const ChannelSet& cs, const std::vector<Precoder>& precoders,
                                         const TrialDraws& draws) {
    const SystemDims& dims = cs.dims();
    std::vector<cx> x(static_cast<std::size_t>(dims.tx_antennas), cx{0.0, 0.0});
    for (int u = 0; u < dims.users; ++u) {
        const std::vector<cx> symbols = modulate_qpsk(draws.bits[static_cast<std::size_t>(u)]);
        const CMatrix& f = precoders[static_cast<std::size_t>(u)].matrix;
        for (int r = 0; r < f.rows(); ++r) {
            cx acc{0.0, 0.0};
            for (int c = 0; c < f.cols(); ++c) acc += f(r, c) * symbols[static_cast<std::size_t>(c)];
            x[static_cast<std::size_t>(r)] += acc;
        }
    }

    std::vector<std::uint64_t> errors(static_cast<std::size_t>(dims.users), 0);
    for (int u = 0; u < dims.users; ++u) {
        const CMatrix& h = cs.channel(u);
        std::vector<cx> r = matvec(h, x);
        const auto& noise = draws.noise[static_cast<std::size_t>(u)];
        for (int m = 0; m < dims.rx_antennas; ++m) r[static_cast<std::size_t>(m)] += noise[static_cast<std::size_t>(m)];

        const ReceiveFilter rf = matched_filter(cs, precoders[static_cast<std::size_t>(u)]);
        const std::vector<cx> shat = matvec(rf.matrix, r);
        const auto& bits = draws.bits[static_cast<std::size_t>(u)];
        for (int l = 0; l < dims.streams; ++l) {
            const cx v = shat[static_cast<std::size_t>(l)];
            const int b0 = v.real() < 0.0 ? 1 : 0;
            const int b1 = v.imag() < 0.0 ? 1 : 0;
            errors[static_cast<std::size_t>(u)] +=
                static_cast<std::uint64_t>(b0 != bits[static_cast<std::size_t>(2 * l)]) +
                static_cast<std::uint64_t>(b1 != bits[static_cast<std::size_t>(2 * l + 1)]);
        }
    }
    return errors;
}

struct TrialOutcome {
    std::uint64_t errors[kMaxSchemes] = {0, 0};
    double rate[kMaxSchemes] = {0.0, 0.0};
};

// One paired trial: a fresh channel realization plus shared symbol/noise
// draws, evaluated under every requested scheme.
TrialOutcome run_paired_trial(const SimConfig& cfg, double sigma2, const RngStream& channel_root,
                              const RngStream& data_root, std::uint64_t trial) {
    const ChannelSet cs = draw_channel_set(cfg.dims, sigma2, channel_root.split(trial));
    RngStream data = data_root.split(trial);
    const TrialDraws draws = draw_trial_randomness(cfg.dims, sigma2, data);

    std::vector<std::pair<CMatrix, CMatrix>> pairs;
    pairs.reserve(static_cast<std::size_t>(cfg.dims.users));
    for (int u = 0; u < cfg.dims.users; ++u) pairs.push_back(build_pair(cs, u));

    TrialOutcome out;
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        std::vector<Precoder> precoders;
        precoders.reserve(pairs.size());
        for (int u = 0; u < cfg.dims.users; ++u) {
            const auto& [a, b] = pairs[static_cast<std::size_t>(u)];
            precoders.push_back(cfg.schemes[s] == Scheme::Original
                                    ? detail::original_precoder_from_pair(a, b, u, cfg.dims.streams)
                                    : detail::proposed_precoder_from_pair(a, b, u, cfg.dims.streams));
        }
        for (std::uint64_t e : detect_errors(cs, precoders, draws)) out.errors[s] += e;
        out.rate[s] = sum_rate(cs, precoders);
    }
    return out;
}

// Evaluates trials [first, first + count) into outcomes, strided across
// workers; outcomes land at fixed indices so the later in-order reduction is
// independent of scheduling.
void run_batch(const SimConfig& cfg, double sigma2, const RngStream& channel_root,
               const RngStream& data_root, std::uint64_t first, std::uint64_t count, int workers,
               std::vector<TrialOutcome>& outcomes) {
    outcomes.resize(static_cast<std::size_t>(count));
    if (workers <= 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i)
            outcomes[static_cast<std::size_t>(i)] =
                run_paired_trial(cfg, sigma2, channel_root, data_root, first + i);
        return;
    }
    const int n = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), count));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::uint64_t i = static_cast<std::uint64_t>(w); i < count;
                     i += static_cast<std::uint64_t>(n))
                    outcomes[static_cast<std::size_t>(i)] =
                        run_paired_trial(cfg, sigma2, channel_root, data_root, first + i);
            } catch (...) {
                failures[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

}  // namespace

void SimConfig::validate() const {
    dims.validate();
    if (snr_grid_db.empty()) throw std::invalid_argument("SimConfig: snr_grid_db must be nonempty");
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
        if (!(snr_grid_db[i] > snr_grid_db[i - 1]))
            throw std::invalid_argument("SimConfig: snr_grid_db must be strictly increasing");
    if (schemes.empty()) throw std::invalid_argument("SimConfig: schemes must be nonempty");
    if (schemes.size() > static_cast<std::size_t>(kMaxSchemes))
        throw std::invalid_argument("SimConfig: at most two schemes");
    if (schemes.size() == 2 && schemes[0] == schemes[1])
        throw std::invalid_argument("SimConfig: schemes must be distinct");
    if (max_trials < 1) throw std::invalid_argument("SimConfig: max_trials >= 1 violated");
}

double noise_variance_for_snr_db(int streams, double snr_db) {
    return static_cast<double>(streams) / std::pow(10.0, snr_db / 10.0);
}

std::vector<cx> modulate_qpsk(const std::vector<int>& bits) {
    if (bits.size() % 2 != 0)
        throw LengthMismatch("modulate_qpsk: bit count " + std::to_string(bits.size()) +
                             " is odd (2 bits per symbol)");
    constexpr double kInvSqrt2 = 0.7071067811865475244;
    std::vector<cx> symbols(bits.size() / 2);
    for (std::size_t l = 0; l < symbols.size(); ++l) {
        const int b0 = bits[2 * l];
        const int b1 = bits[2 * l + 1];
        if ((b0 | b1) & ~1)
            throw std::invalid_argument("modulate_qpsk: bits must be 0 or 1");
        symbols[l] = cx{(1.0 - 2.0 * b0) * kInvSqrt2, (1.0 - 2.0 * b1) * kInvSqrt2};
    }
    return symbols;
}

std::vector<std::uint64_t> simulate_trial(const ChannelSet& cs, Scheme scheme, RngStream& rng) {
    const TrialDraws draws = draw_trial_randomness(cs.dims(), cs.noise_variance(), rng);
    std::vector<Precoder> precoders;
    precoders.reserve(static_cast<std::size_t>(cs.dims().users));
    for (int u = 0; u < cs.dims().users; ++u) precoders.push_back(make_precoder(cs, u, scheme));
    return detect_errors(cs, precoders, draws);
}

std::vector<BerPoint> run_sweep(const SimConfig& cfg, int workers) {
    cfg.validate();
    const int w = resolve_worker_count(workers);
    const RngStream master(cfg.master_seed);

    std::vector<BerPoint> points;
    points.reserve(cfg.snr_grid_db.size() * cfg.schemes.size());

    std::vector<TrialOutcome> outcomes;
    for (std::size_t pi = 0; pi < cfg.snr_grid_db.size(); ++pi) {
        const double snr_db = cfg.snr_grid_db[pi];
        const double sigma2 = noise_variance_for_snr_db(cfg.dims.streams, snr_db);
        const RngStream channel_root = master.split(kChannelTag).split(pi);
        const RngStream data_root = master.split(kDataTag).split(pi);

        std::uint64_t errors[kMaxSchemes] = {0, 0};
        double rate_sum[kMaxSchemes] = {0.0, 0.0};
        double rate_sq_sum[kMaxSchemes] = {0.0, 0.0};
        std::uint64_t trials_done = 0;
        std::uint64_t batch = kFirstBatch;

        while (trials_done < cfg.max_trials) {
            const std::uint64_t count = std::min(batch, cfg.max_trials - trials_done);
            run_batch(cfg, sigma2, channel_root, data_root, trials_done, count, w, outcomes);
            for (std::uint64_t i = 0; i < count; ++i) {
                const TrialOutcome& o = outcomes[static_cast<std::size_t>(i)];
                for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
                    errors[s] += o.errors[s];
                    rate_sum[s] += o.rate[s];
                    rate_sq_sum[s] += o.rate[s] * o.rate[s];
                }
            }
            trials_done += count;
            bool all_resolved = true;
            for (std::size_t s = 0; s < cfg.schemes.size(); ++s)
                all_resolved = all_resolved && errors[s] >= cfg.min_bit_errors;
            if (all_resolved) break;
            batch = std::min(batch * 2, kMaxBatch);
        }

        const std::uint64_t bits = trials_done * static_cast<std::uint64_t>(cfg.dims.users) *
                                   static_cast<std::uint64_t>(2 * cfg.dims.streams);
        for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
            BerPoint p;
            p.snr_db = snr_db;
            p.scheme = cfg.schemes[s];
            p.bit_errors = errors[s];
            p.bits_simulated = bits;
            p.ber = static_cast<double>(errors[s]) / static_cast<double>(bits);
            const double n = static_cast<double>(trials_done);
            p.sum_rate_mean = rate_sum[s] / n;
            if (trials_done > 1) {
                const double var =
                    std::max(0.0, (rate_sq_sum[s] - n * p.sum_rate_mean * p.sum_rate_mean) / (n - 1.0));
                p.sum_rate_stderr = std::sqrt(var / n);
            }
            p.trials = trials_done;
            p.resolved = errors[s] >= cfg.min_bit_errors;
            points.push_back(p);
        }
    }
    return points;
}

double interpolate_snr_at_ber(const std::vector<BerPoint>& curve, double target_ber) {
    if (!(target_ber > 0.0))
        throw std::invalid_argument("interpolate_snr_at_ber: target must be positive");
    if (curve.empty()) throw TargetNotBracketed("interpolate_snr_at_ber: empty curve");
    for (const BerPoint& p : curve)
        if (p.ber == target_ber) return p.snr_db;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const double b0 = curve[i].ber;
        const double b1 = curve[i + 1].ber;
        if (b0 > target_ber && target_ber > b1 && b1 > 0.0) {
            const double l0 = std::log10(b0);
            const double l1 = std::log10(b1);
            const double t = (std::log10(target_ber) - l0) / (l1 - l0);
            return curve[i].snr_db + t * (curve[i + 1].snr_db - curve[i].snr_db);
        }
    }
    throw TargetNotBracketed("interpolate_snr_at_ber: target " + std::to_string(target_ber) +
                             " is not bracketed by consecutive positive-BER points");
}

}  // namespace lbeam
