#include "lbeam/property_checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "lbeam/channel.hpp"
#include "lbeam/link_metrics.hpp"
#include "lbeam/precoder.hpp"

namespace lbeam {

namespace {

constexpr std::uint64_t kSuiteTag = 0x1A57;
constexpr std::uint64_t kMarginTag = 0x2B68;
constexpr std::uint64_t kSearchTag = 0x3C79;

const double kSigmaGrid[4] = {1e-3, 0.1, 1.0, 10.0};

double diag_residual_rel(const CMatrix& transform, const CMatrix& m,
                         const std::vector<double>& diag, double denom) {
    const CMatrix congruence = transform.adjoint() * m * transform;
    double sq = 0.0;
    for (int i = 0; i < congruence.rows(); ++i)
        for (int j = 0; j < congruence.cols(); ++j) {
            cx v = congruence(i, j);
            if (i == j) v -= cx{diag[static_cast<std::size_t>(i)], 0.0};
            sq += std::norm(v);
        }
    return std::sqrt(sq) / denom;
}

bool descending(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) return false;
    return true;
}

bool ascending(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1]) return false;
    return true;
}

}  // namespace

bool PropertySuiteReport::all_passed() const {
    return max_pair_residual_rel <= 1e-8 && max_unity_gap <= 1e-10 && max_rank_tail <= 1e-10 &&
           ordering_violations == 0 && max_spectrum_gap <= 1e-8 && max_slnr_original_gap <= 1e-8 &&
           max_slnr_proposed_gap <= 1e-8 && slnr_relaxation_violations == 0 &&
           max_l1_parallel_gap <= 1e-8 && margin_violations == 0;
}

PropertySuiteReport run_property_checks(int instances, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    PropertySuiteReport r;
    r.instances = instances;
    r.margin_instances = instances;

    const RngStream root = RngStream(seed).split(kSuiteTag);
    for (int i = 0; i < instances; ++i) {
        SystemDims dims;
        dims.streams = (i % 3) + 1;
        const double sigma2 = kSigmaGrid[(i / 3) % 4];
        const ChannelSet cs =
            draw_channel_set(dims, sigma2, root.split(static_cast<std::uint64_t>(i)));
        const int k = i % dims.users;
        const int m_rx = dims.rx_antennas;
        const auto [a, b] = build_pair(cs, k);
        const double norm_a = frobenius_norm(a);
        const double norm_b = frobenius_norm(b);

        const PairDiagonalization pd = simultaneous_diagonalize(a, b);
        r.max_pair_residual_rel =
            std::max({r.max_pair_residual_rel,
                      diag_residual_rel(pd.transform, a, pd.signal_gains, norm_a),
                      diag_residual_rel(pd.transform, b, pd.complement_gains, norm_b)});
        // The unity partition is measured from the congruence products
        // themselves, not from the reported gains (whose complement side is
        // exact by definition).
        const CMatrix pap = pd.transform.adjoint() * (a * pd.transform);
        const CMatrix pbp = pd.transform.adjoint() * (b * pd.transform);
        for (int j = 0; j < pap.rows(); ++j)
            r.max_unity_gap = std::max(
                r.max_unity_gap, std::abs(pap(j, j).real() + pbp(j, j).real() - 1.0));
        if (!descending(pd.signal_gains) || !ascending(pd.complement_gains)) ++r.ordering_violations;
        for (std::size_t j = static_cast<std::size_t>(m_rx); j < pd.signal_gains.size(); ++j)
            r.max_rank_tail = std::max(r.max_rank_tail, std::abs(pd.signal_gains[j]));

        const GedDiagonalization ged = ged_diagonalize(a, b);
        r.max_pair_residual_rel =
            std::max(r.max_pair_residual_rel,
                     diag_residual_rel(ged.transform, a, ged.lambda, norm_a));
        const std::vector<double> ones(ged.lambda.size(), 1.0);
        r.max_pair_residual_rel =
            std::max(r.max_pair_residual_rel,
                     diag_residual_rel(ged.transform, b, ones, static_cast<double>(a.rows())));
        if (!descending(ged.lambda)) ++r.ordering_violations;
        for (std::size_t j = static_cast<std::size_t>(m_rx); j < ged.lambda.size(); ++j)
            r.max_rank_tail = std::max(r.max_rank_tail, std::abs(ged.lambda[j]));

        for (int j = 0; j < m_rx; ++j) {
            const double lambda = ged.lambda[static_cast<std::size_t>(j)];
            const double theta = pd.signal_gains[static_cast<std::size_t>(j)];
            const double omega = pd.complement_gains[static_cast<std::size_t>(j)];
            const double gap = std::abs(lambda - theta / omega) / std::max(1.0, lambda);
            r.max_spectrum_gap = std::max(r.max_spectrum_gap, gap);
        }

        const Precoder orig = detail::original_precoder_from_pair(a, b, k, dims.streams);
        const Precoder prop = detail::proposed_precoder_from_pair(a, b, k, dims.streams);
        const double slnr_orig = slnr_value(cs, k, orig.matrix);
        const double slnr_prop = slnr_value(cs, k, prop.matrix);
        double lam_sum = 0.0;
        for (int j = 0; j < dims.streams; ++j) lam_sum += ged.lambda[static_cast<std::size_t>(j)];
        const double expect_orig = lam_sum / dims.streams;
        double th_sum = 0.0;
        double om_sum = 0.0;
        for (int j = 0; j < dims.streams; ++j) {
            th_sum += pd.signal_gains[static_cast<std::size_t>(j)];
            om_sum += pd.complement_gains[static_cast<std::size_t>(j)];
        }
        const double expect_prop = th_sum / om_sum;
        r.max_slnr_original_gap =
            std::max(r.max_slnr_original_gap, std::abs(slnr_orig - expect_orig) / expect_orig);
        r.max_slnr_proposed_gap =
            std::max(r.max_slnr_proposed_gap, std::abs(slnr_prop - expect_prop) / expect_prop);
        if (slnr_prop > slnr_orig * (1.0 + 1e-12) + 1e-15) ++r.slnr_relaxation_violations;

        if (dims.streams == 1) {
            cx dot{0.0, 0.0};
            double n1 = 0.0;
            double n2 = 0.0;
            for (int row = 0; row < orig.matrix.rows(); ++row) {
                dot += std::conj(prop.matrix(row, 0)) * orig.matrix(row, 0);
                n1 += std::norm(orig.matrix(row, 0));
                n2 += std::norm(prop.matrix(row, 0));
            }
            r.max_l1_parallel_gap = std::max(
                r.max_l1_parallel_gap, std::abs(1.0 - std::abs(dot) / std::sqrt(n1 * n2)));
        }
    }

    // Margin contraction companion loop, L in {2, 3} only.
    const RngStream margin_root = RngStream(seed).split(kMarginTag);
    for (int i = 0; i < instances; ++i) {
        SystemDims dims;
        dims.streams = 2 + (i % 2);
        const double sigma2 = kSigmaGrid[i % 4];
        const ChannelSet cs =
            draw_channel_set(dims, sigma2, margin_root.split(static_cast<std::uint64_t>(i)));
        const int k = i % dims.users;
        const Precoder orig = original_precoder(cs, k);
        const Precoder prop = proposed_precoder(cs, k);
        const auto d_orig = stream_margins_db(approx_stream_sinr(orig, sigma2));
        const auto d_prop = stream_margins_db(approx_stream_sinr(prop, sigma2));
        for (int m = 0; m < dims.streams; ++m) {
            for (int l = m + 1; l < dims.streams; ++l) {
                const double lam_m = orig.stream_gains[static_cast<std::size_t>(m)];
                const double lam_l = orig.stream_gains[static_cast<std::size_t>(l)];
                if ((lam_m - lam_l) / std::max(lam_m, 1e-300) <= 1e-6) continue;
                ++r.margin_pairs_checked;
                // Positive stronger-over-weaker margins: entry (m, l), m < l.
                if (!(d_prop[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)] <
                      d_orig[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)]))
                    ++r.margin_violations;
            }
        }
    }

    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

void print_property_report(const PropertySuiteReport& r, std::ostream& out) {
    auto line = [&](const char* name, double value, double limit) {
        out << "  " << name << " max " << value << " (limit " << limit << ") "
            << (value <= limit ? "PASS" : "FAIL") << '\n';
    };
    out << "property suite: " << r.instances << " instances plus " << r.margin_instances
        << " margin instances (" << r.seconds << " s)\n";
    line("joint-diagonalization residual      ", r.max_pair_residual_rel, 1e-8);
    line("gain partition unity gap            ", r.max_unity_gap, 1e-10);
    line("rank-pattern tail                   ", r.max_rank_tail, 1e-10);
    out << "  gain ordering violations             " << r.ordering_violations << " "
        << (r.ordering_violations == 0 ? "PASS" : "FAIL") << '\n';
    line("spectrum link gap                   ", r.max_spectrum_gap, 1e-8);
    line("SLNR identity gap (original)        ", r.max_slnr_original_gap, 1e-8);
    line("SLNR identity gap (proposed)        ", r.max_slnr_proposed_gap, 1e-8);
    out << "  SLNR relaxation violations           " << r.slnr_relaxation_violations << " "
        << (r.slnr_relaxation_violations == 0 ? "PASS" : "FAIL") << '\n';
    line("L=1 parallelism gap                 ", r.max_l1_parallel_gap, 1e-8);
    out << "  margin contraction violations        " << r.margin_violations << " of "
        << r.margin_pairs_checked << " pairs " << (r.margin_violations == 0 ? "PASS" : "FAIL")
        << '\n';
    out << "overall: " << (r.all_passed() ? "PASS" : "FAIL") << '\n';
}

SlnrSearchReport run_slnr_search(int instances, int draws_per_instance, std::uint64_t seed) {
    SlnrSearchReport report;
    report.instances = instances;
    report.draws_per_instance = draws_per_instance;
    report.max_excess = -std::numeric_limits<double>::infinity();

    const RngStream root = RngStream(seed).split(kSearchTag);
    for (int i = 0; i < instances; ++i) {
        SystemDims dims;
        dims.streams = (i % 3) + 1;
        const double sigma2 = kSigmaGrid[i % 4];
        const RngStream inst = root.split(static_cast<std::uint64_t>(i));
        const ChannelSet cs = draw_channel_set(dims, sigma2, inst);
        const int k = i % dims.users;
        const double best = slnr_value(cs, k, original_precoder(cs, k).matrix);

        RngStream draws = inst.split(0xF00D);
        for (int d = 0; d < draws_per_instance; ++d) {
            CMatrix f(dims.tx_antennas, dims.streams);
            for (int row = 0; row < f.rows(); ++row)
                for (int col = 0; col < f.cols(); ++col) f(row, col) = draws.next_complex_gaussian();
            const double power = frobenius_norm_sq(f);
            f = std::sqrt(static_cast<double>(dims.streams) / power) * f;
            const double value = slnr_value(cs, k, f);
            report.max_excess = std::max(report.max_excess, value - best);
            if (value > best + 1e-8) ++report.violations;
        }
    }
    return report;
}

}  // namespace lbeam
