#include "lbeam/link_metrics.hpp"

#include <cmath>
#include <string>

namespace lbeam {

namespace {

void require_precoder_per_user(const ChannelSet& cs, const std::vector<Precoder>& precoders) {
    if (static_cast<int>(precoders.size()) != cs.dims().users)
        throw std::invalid_argument("expected one precoder per user (" +
                                    std::to_string(cs.dims().users) + "), got " +
                                    std::to_string(precoders.size()));
    for (int u = 0; u < cs.dims().users; ++u)
        if (precoders[static_cast<std::size_t>(u)].user != u)
            throw std::invalid_argument("precoder list must be indexed by user; slot " +
                                        std::to_string(u) + " holds user " +
                                        std::to_string(precoders[static_cast<std::size_t>(u)].user));
}

}  // namespace

ReceiveFilter matched_filter(const ChannelSet& cs, const Precoder& p) {
    const CMatrix& h = cs.channel(p.user);
    ReceiveFilter rf;
    rf.user = p.user;
    rf.matrix = (h * p.matrix).adjoint();
    return rf;
}

StreamPowerTerms stream_power_terms(const ChannelSet& cs, const std::vector<Precoder>& precoders,
                                    int k) {
    require_precoder_per_user(cs, precoders);
    const Precoder& own = precoders[static_cast<std::size_t>(k)];
    const CMatrix& h = cs.channel(k);
    const ReceiveFilter rf = matched_filter(cs, own);
    const int streams = own.matrix.cols();
    const double sigma2 = cs.noise_variance();

    // Effective own-user matrix G H_k F_k: diagonal by construction for both
    // schemes; assert before trusting the diagonal as the signal gain.
    const CMatrix effective = rf.matrix * (h * own.matrix);
    double max_diag = 0.0;
    double max_off = 0.0;
    for (int l = 0; l < streams; ++l)
        for (int m = 0; m < streams; ++m) {
            const double mag = std::abs(effective(l, m));
            if (l == m)
                max_diag = std::max(max_diag, mag);
            else
                max_off = std::max(max_off, mag);
        }
    if (max_off > 1e-8 * max_diag)
        throw NotDiagonalEffective("stream_power_terms: effective matrix of user " +
                                   std::to_string(k) + " is not diagonal (off/diag = " +
                                   std::to_string(max_off / max_diag) + ")");

    StreamPowerTerms out;
    out.signal.resize(static_cast<std::size_t>(streams));
    out.cci.assign(static_cast<std::size_t>(streams), 0.0);
    out.noise.resize(static_cast<std::size_t>(streams));

    for (int l = 0; l < streams; ++l) {
        const double d = effective(l, l).real();
        out.signal[static_cast<std::size_t>(l)] = d * d;
        double g_row_sq = 0.0;
        for (int m = 0; m < rf.matrix.cols(); ++m) g_row_sq += std::norm(rf.matrix(l, m));
        out.noise[static_cast<std::size_t>(l)] = sigma2 * g_row_sq;
    }
    for (int i = 0; i < cs.dims().users; ++i) {
        if (i == k) continue;
        const CMatrix cross = rf.matrix * (h * precoders[static_cast<std::size_t>(i)].matrix);
        for (int l = 0; l < streams; ++l) {
            double acc = 0.0;
            for (int m = 0; m < cross.cols(); ++m) acc += std::norm(cross(l, m));
            out.cci[static_cast<std::size_t>(l)] += acc;
        }
    }
    return out;
}

std::vector<double> exact_stream_sinr(const ChannelSet& cs, const std::vector<Precoder>& precoders,
                                      int k) {
    const StreamPowerTerms terms = stream_power_terms(cs, precoders, k);
    std::vector<double> sinr(terms.signal.size());
    for (std::size_t l = 0; l < sinr.size(); ++l)
        sinr[l] = terms.signal[l] / (terms.cci[l] + terms.noise[l]);
    return sinr;
}

std::vector<double> approx_stream_sinr(const Precoder& p, double sigma2) {
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("approx_stream_sinr: sigma2 must be positive");
    std::vector<double> sinr(p.stream_gains.size());
    for (std::size_t l = 0; l < sinr.size(); ++l)
        sinr[l] = p.scale * p.scale * p.stream_gains[l] / sigma2;
    return sinr;
}

std::vector<std::vector<double>> stream_margins_db(const std::vector<double>& sinr) {
    for (double v : sinr)
        if (!(v > 0.0))
            throw NonPositiveSinr("stream_margins_db: SINR entries must be positive, got " +
                                  std::to_string(v));
    const std::size_t n = sinr.size();
    std::vector<std::vector<double>> table(n, std::vector<double>(n, 0.0));
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m)
            if (l != m) table[l][m] = 10.0 * std::log10(sinr[l] / sinr[m]);
    return table;
}

double sum_rate(const ChannelSet& cs, const std::vector<Precoder>& precoders) {
    require_precoder_per_user(cs, precoders);
    double rate = 0.0;
    for (int k = 0; k < cs.dims().users; ++k)
        for (double s : exact_stream_sinr(cs, precoders, k)) rate += std::log2(1.0 + s);
    return rate;
}

StreamSinrReport stream_sinr_report(const ChannelSet& cs, const std::vector<Precoder>& precoders,
                                    int k) {
    StreamSinrReport report;
    report.user = k;
    report.exact_sinr = exact_stream_sinr(cs, precoders, k);
    report.approx_sinr = approx_stream_sinr(precoders[static_cast<std::size_t>(k)],
                                            cs.noise_variance());
    report.margins_db = stream_margins_db(report.exact_sinr);
    return report;
}

}  // namespace lbeam
