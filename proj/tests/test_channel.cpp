#include "doctest.h"

#include <cstdio>
#include <string>
#include <vector>

#include "lbeam/channel.hpp"
#include "lbeam/cmatrix.hpp"
#include "lbeam/rng.hpp"

using namespace lbeam;

namespace {

// Three orthogonal-support 2x6 channels, trivially full rank.
std::vector<CMatrix> disjoint_channels() {
    std::vector<CMatrix> hs;
    for (int k = 0; k < 3; ++k) {
        CMatrix h(2, 6);
        h(0, 2 * k) = cx{static_cast<double>(k + 1), 0.0};
        h(1, 2 * k + 1) = cx{1.0, static_cast<double>(k)};
        hs.push_back(std::move(h));
    }
    return hs;
}

}  // namespace

TEST_CASE("SystemDims validation names each violated bound") {
    SystemDims d;
    CHECK_EQ(d.tx_antennas, 8);
    CHECK_EQ(d.rx_antennas, 3);
    CHECK_EQ(d.users, 2);
    CHECK_EQ(d.streams, 2);
    CHECK_NOTHROW(d.validate());

    d.streams = 5;
    CHECK_THROWS_WITH_AS(d.validate(),
                         "SystemDims: 1 <= L <= M violated (streams=5, rx_antennas=3)",
                         std::invalid_argument);
    d.streams = 0;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    d = SystemDims{};
    d.users = 1;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    d = SystemDims{};
    d.tx_antennas = 0;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    d = SystemDims{};
    d.rx_antennas = 0;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("ChannelSet construction validates shapes, count, and noise") {
    const SystemDims dims{6, 2, 3, 2};
    auto hs = disjoint_channels();
    CHECK_NOTHROW(ChannelSet(dims, hs, 1.0));
    CHECK_THROWS_AS(ChannelSet(dims, hs, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ChannelSet(dims, hs, -1.0), std::invalid_argument);

    auto two = hs;
    two.pop_back();
    CHECK_THROWS_AS(ChannelSet(dims, two, 1.0), std::invalid_argument);

    auto bad_shape = hs;
    bad_shape[1] = CMatrix(2, 5);
    CHECK_THROWS_AS(ChannelSet(dims, bad_shape, 1.0), std::invalid_argument);

    const ChannelSet cs(dims, hs, 0.25);
    CHECK_EQ(cs.noise_variance(), 0.25);
    CHECK_EQ(cs.dims(), dims);
    CHECK_EQ(cs.channel(2)(0, 4), cx{3.0, 0.0});
    CHECK_THROWS_AS(cs.channel(3), std::out_of_range);
    CHECK_THROWS_AS(cs.channel(-1), std::out_of_range);
}

TEST_CASE("rank-deficient channels are rejected") {
    const SystemDims dims{6, 2, 3, 2};
    auto hs = disjoint_channels();
    // Make user 1's second row a copy of its first: rank 1 < M = 2.
    for (int c = 0; c < 6; ++c) hs[1](1, c) = hs[1](0, c);
    CHECK_THROWS_AS(ChannelSet(dims, hs, 1.0), RankDeficientChannel);
}

TEST_CASE("draw_channel_set is deterministic and split per user") {
    const SystemDims dims{};
    const RngStream rng(404);
    const ChannelSet a = draw_channel_set(dims, 1.0, rng);
    const ChannelSet b = draw_channel_set(dims, 1.0, rng);
    CHECK_EQ(frobenius_distance(a.channel(0), b.channel(0)), 0.0);
    CHECK_EQ(frobenius_distance(a.channel(1), b.channel(1)), 0.0);
    CHECK_GT(frobenius_distance(a.channel(0), a.channel(1)), 1e-3);

    const ChannelSet c = draw_channel_set(dims, 1.0, RngStream(405));
    CHECK_GT(frobenius_distance(a.channel(0), c.channel(0)), 1e-3);

    CHECK_THROWS_AS(draw_channel_set(dims, 0.0, rng), std::invalid_argument);
    SystemDims bad;
    bad.streams = 9;
    CHECK_THROWS_AS(draw_channel_set(bad, 1.0, rng), std::invalid_argument);
}

TEST_CASE("leakage_channel stacks the other users in ascending order") {
    const SystemDims dims{6, 2, 3, 2};
    const ChannelSet cs(dims, disjoint_channels(), 1.0);

    const CMatrix hbar1 = leakage_channel(cs, 1);
    REQUIRE_EQ(hbar1.rows(), 4);
    REQUIRE_EQ(hbar1.cols(), 6);
    // Rows 0..1 come from user 0, rows 2..3 from user 2.
    CHECK_EQ(hbar1(0, 0), cs.channel(0)(0, 0));
    CHECK_EQ(hbar1(1, 1), cs.channel(0)(1, 1));
    CHECK_EQ(hbar1(2, 4), cs.channel(2)(0, 4));
    CHECK_EQ(hbar1(3, 5), cs.channel(2)(1, 5));

    const CMatrix hbar0 = leakage_channel(cs, 0);
    CHECK_EQ(hbar0(0, 2), cs.channel(1)(0, 2));
    CHECK_THROWS_AS(leakage_channel(cs, 3), std::out_of_range);
}

TEST_CASE("noise_term is (M sigma^2 / L) I_N") {
    const SystemDims dims{8, 3, 2, 2};
    const ChannelSet cs = draw_channel_set(dims, 4.0, RngStream(1));
    const CMatrix t = noise_term(cs);
    REQUIRE_EQ(t.rows(), 8);
    REQUIRE_EQ(t.cols(), 8);
    CHECK_EQ(t(0, 0), cx{6.0, 0.0});  // 3 * 4 / 2
    CHECK_EQ(t(7, 7), cx{6.0, 0.0});
    CHECK_EQ(t(0, 1), cx{0.0, 0.0});
}

TEST_CASE("channel entries are CN(0,1): unit power, half per component") {
    const SystemDims dims{};
    const RngStream root(550);
    double pow_sum = 0.0, re_sq = 0.0, im_sq = 0.0;
    long n = 0;
    const long target = 1'000'000;
    for (std::uint64_t i = 0; n < target; ++i) {
        const ChannelSet cs = draw_channel_set(dims, 1.0, root.split(i));
        for (int k = 0; k < dims.users; ++k) {
            const CMatrix& h = cs.channel(k);
            for (int r = 0; r < h.rows(); ++r)
                for (int c = 0; c < h.cols(); ++c) {
                    const cx v = h(r, c);
                    pow_sum += std::norm(v);
                    re_sq += v.real() * v.real();
                    im_sq += v.imag() * v.imag();
                    ++n;
                }
        }
    }
    CHECK_EQ(pow_sum / n, doctest::Approx(1.0).epsilon(0.01));
    CHECK_EQ(re_sq / n, doctest::Approx(0.5).epsilon(0.02));
    CHECK_EQ(im_sq / n, doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("JSON round-trip preserves the realization exactly") {
    const std::string path = "channel_roundtrip_test.json";
    const ChannelSet cs = draw_channel_set(SystemDims{}, 0.125, RngStream(8080));
    save_channel_set_json(cs, path);
    const ChannelSet back = load_channel_set_json(path);
    CHECK_EQ(back.dims(), cs.dims());
    CHECK_EQ(back.noise_variance(), cs.noise_variance());
    for (int k = 0; k < cs.dims().users; ++k)
        CHECK_EQ(frobenius_distance(back.channel(k), cs.channel(k)), 0.0);
    std::remove(path.c_str());
}

TEST_CASE("JSON loader reports I/O and structure failures as IoError") {
    CHECK_THROWS_AS(load_channel_set_json("no_such_file.json"), IoError);

    const std::string bad = "channel_bad_test.json";
    {
        std::FILE* f = std::fopen(bad.c_str(), "w");
        REQUIRE(f != nullptr);
        std::fputs("{ not json", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(load_channel_set_json(bad), IoError);
    {
        std::FILE* f = std::fopen(bad.c_str(), "w");
        REQUIRE(f != nullptr);
        std::fputs("{\"tx_antennas\": 4}", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(load_channel_set_json(bad), IoError);
    std::remove(bad.c_str());

    CHECK_THROWS_AS(save_channel_set_json(draw_channel_set(SystemDims{}, 1.0, RngStream(1)),
                                          "/nonexistent_dir/x.json"),
                    IoError);
}
