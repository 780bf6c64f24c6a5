#include "lbeam/channel.hpp"

#include <cstdio>
#include <fstream>
#include <utility>

#include "json.hpp"

#include "lbeam/linalg.hpp"

namespace lbeam {

void SystemDims::validate() const {
    if (tx_antennas < 1)
        throw std::invalid_argument("SystemDims: N >= 1 violated (tx_antennas=" +
                                    std::to_string(tx_antennas) + ")");
    if (rx_antennas < 1)
        throw std::invalid_argument("SystemDims: M >= 1 violated (rx_antennas=" +
                                    std::to_string(rx_antennas) + ")");
    if (users < 2)
        throw std::invalid_argument("SystemDims: K >= 2 violated (users=" + std::to_string(users) + ")");
    if (streams < 1 || streams > rx_antennas)
        throw std::invalid_argument("SystemDims: 1 <= L <= M violated (streams=" +
                                    std::to_string(streams) + ", rx_antennas=" +
                                    std::to_string(rx_antennas) + ")");
}

namespace {

// Numerical full-rank assertion via the eigenvalues of the M x M Gram matrix
// H H^H: smallest singular value must exceed 1e-10 of the largest.
void assert_full_rank(const CMatrix& h, int user) {
    const CMatrix gram = h * h.adjoint();
    const EigResult eig = hermitian_eig(gram);
    const double largest = eig.eigenvalues.front();
    const double smallest = eig.eigenvalues.back();
    constexpr double kRatio = 1e-10;
    if (!(largest > 0.0) || smallest <= kRatio * kRatio * largest)
        throw RankDeficientChannel("ChannelSet: channel of user " + std::to_string(user) +
                                   " is numerically rank deficient");
}

}  // namespace

ChannelSet::ChannelSet(SystemDims dims, std::vector<CMatrix> channels, double noise_variance)
    : dims_(dims), channels_(std::move(channels)), noise_variance_(noise_variance) {
    dims_.validate();
    if (!(noise_variance_ > 0.0))
        throw std::invalid_argument("ChannelSet: noise_variance > 0 violated (" +
                                    std::to_string(noise_variance_) + ")");
    if (static_cast<int>(channels_.size()) != dims_.users)
        throw std::invalid_argument("ChannelSet: expected " + std::to_string(dims_.users) +
                                    " channel matrices, got " + std::to_string(channels_.size()));
    for (int k = 0; k < dims_.users; ++k) {
        const CMatrix& h = channels_[static_cast<std::size_t>(k)];
        if (h.rows() != dims_.rx_antennas || h.cols() != dims_.tx_antennas)
            throw std::invalid_argument("ChannelSet: channel of user " + std::to_string(k) +
                                        " has shape " + std::to_string(h.rows()) + "x" +
                                        std::to_string(h.cols()) + ", expected " +
                                        std::to_string(dims_.rx_antennas) + "x" +
                                        std::to_string(dims_.tx_antennas));
        assert_full_rank(h, k);
    }
}

const CMatrix& ChannelSet::channel(int k) const {
    if (k < 0 || k >= dims_.users)
        throw std::out_of_range("ChannelSet::channel: user index " + std::to_string(k) +
                                " outside 0.." + std::to_string(dims_.users - 1));
    return channels_[static_cast<std::size_t>(k)];
}

ChannelSet draw_channel_set(const SystemDims& dims, double noise_variance, const RngStream& rng) {
    dims.validate();
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("draw_channel_set: noise_variance > 0 violated (" +
                                    std::to_string(noise_variance) + ")");
    std::vector<CMatrix> channels;
    channels.reserve(static_cast<std::size_t>(dims.users));
    for (int k = 0; k < dims.users; ++k) {
        RngStream user_rng = rng.split(static_cast<std::uint64_t>(k));
        CMatrix h(dims.rx_antennas, dims.tx_antennas);
        for (int r = 0; r < dims.rx_antennas; ++r)
            for (int c = 0; c < dims.tx_antennas; ++c) h(r, c) = user_rng.next_complex_gaussian();
        channels.push_back(std::move(h));
    }
    return ChannelSet(dims, std::move(channels), noise_variance);
}

CMatrix leakage_channel(const ChannelSet& cs, int k) {
    const SystemDims& d = cs.dims();
    if (k < 0 || k >= d.users)
        throw std::out_of_range("leakage_channel: user index " + std::to_string(k) + " outside 0.." +
                                std::to_string(d.users - 1));
    CMatrix stacked((d.users - 1) * d.rx_antennas, d.tx_antennas);
    int row = 0;
    for (int i = 0; i < d.users; ++i) {
        if (i == k) continue;
        const CMatrix& h = cs.channel(i);
        for (int r = 0; r < d.rx_antennas; ++r, ++row)
            for (int c = 0; c < d.tx_antennas; ++c) stacked(row, c) = h(r, c);
    }
    return stacked;
}

CMatrix noise_term(const ChannelSet& cs) {
    const SystemDims& d = cs.dims();
    const double scale = static_cast<double>(d.rx_antennas) * cs.noise_variance() /
                         static_cast<double>(d.streams);
    CMatrix out(d.tx_antennas, d.tx_antennas);
    for (int i = 0; i < d.tx_antennas; ++i) out(i, i) = cx{scale, 0.0};
    return out;
}

void save_channel_set_json(const ChannelSet& cs, const std::string& path) {
    const SystemDims& d = cs.dims();
    nlohmann::json doc;
    doc["tx_antennas"] = d.tx_antennas;
    doc["rx_antennas"] = d.rx_antennas;
    doc["users"] = d.users;
    doc["streams"] = d.streams;
    doc["noise_variance"] = cs.noise_variance();
    nlohmann::json channels = nlohmann::json::array();
    for (int k = 0; k < d.users; ++k) {
        const CMatrix& h = cs.channel(k);
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < h.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < h.cols(); ++c)
                row.push_back({h(r, c).real(), h(r, c).imag()});
            rows.push_back(std::move(row));
        }
        channels.push_back(std::move(rows));
    }
    doc["channels"] = std::move(channels);

    std::ofstream out(path);
    if (!out) throw IoError("save_channel_set_json: cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out.good()) throw IoError("save_channel_set_json: write to '" + path + "' failed");
}

ChannelSet load_channel_set_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_channel_set_json: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("load_channel_set_json: '" + path + "' is not valid JSON: " + e.what());
    }
    try {
        SystemDims dims;
        dims.tx_antennas = doc.at("tx_antennas").get<int>();
        dims.rx_antennas = doc.at("rx_antennas").get<int>();
        dims.users = doc.at("users").get<int>();
        dims.streams = doc.at("streams").get<int>();
        const double noise_variance = doc.at("noise_variance").get<double>();
        std::vector<CMatrix> channels;
        for (const auto& rows : doc.at("channels")) {
            CMatrix h(static_cast<int>(rows.size()),
                      rows.empty() ? 0 : static_cast<int>(rows.front().size()));
            for (int r = 0; r < h.rows(); ++r)
                for (int c = 0; c < h.cols(); ++c) {
                    const auto& pair = rows.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c));
                    h(r, c) = cx{pair.at(0).get<double>(), pair.at(1).get<double>()};
                }
            channels.push_back(std::move(h));
        }
        return ChannelSet(dims, std::move(channels), noise_variance);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("load_channel_set_json: '" + path + "' has unexpected structure: " + e.what());
    }
}

}  // namespace lbeam
