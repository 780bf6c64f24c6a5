#include "doctest.h"

#include <cmath>
#include <vector>

#include "lbeam/channel.hpp"
#include "lbeam/cmatrix.hpp"
#include "lbeam/linalg.hpp"
#include "lbeam/precoder.hpp"
#include "lbeam/rng.hpp"

using namespace lbeam;

namespace {

// Diagonal two-user instance with every quantity computable by hand:
// H1 = [[2,0,0,0],[0,1,0,0]], H2 = [[0,0,1,0],[0,0,0,1]], sigma^2 = 1, L = 2.
// User 0's pair is A = diag(4,1,0,0), B = diag(1,1,2,2).
ChannelSet diagonal_instance() {
    const SystemDims dims{4, 2, 2, 2};
    CMatrix h1(2, 4);
    h1(0, 0) = cx{2, 0};
    h1(1, 1) = cx{1, 0};
    CMatrix h2(2, 4);
    h2(0, 2) = cx{1, 0};
    h2(1, 3) = cx{1, 0};
    return ChannelSet(dims, {h1, h2}, 1.0);
}

double rel_diag_residual(const CMatrix& t, const CMatrix& m, const std::vector<double>& d,
                         double denom) {
    return frobenius_distance(t.adjoint() * m * t, diag_matrix(d)) / denom;
}

}  // namespace

TEST_CASE("scheme names parse and print") {
    CHECK_EQ(scheme_name(Scheme::Original), std::string("original"));
    CHECK_EQ(scheme_name(Scheme::Proposed), std::string("proposed"));
    CHECK_EQ(parse_scheme("original"), Scheme::Original);
    CHECK_EQ(parse_scheme("proposed"), Scheme::Proposed);
    CHECK_FALSE(parse_scheme("both").has_value());
    CHECK_FALSE(parse_scheme("").has_value());
}

TEST_CASE("build_pair on the diagonal instance") {
    const ChannelSet cs = diagonal_instance();
    const auto [a, b] = build_pair(cs, 0);
    CHECK_EQ(frobenius_distance(a, diag_matrix(std::vector<double>{4, 1, 0, 0})), 0.0);
    // B = (M sigma^2 / L) I + Hbar^H Hbar = 1*I + diag(0,0,1,1).
    CHECK_EQ(frobenius_distance(b, diag_matrix(std::vector<double>{1, 1, 2, 2})), 0.0);

    const auto [a2, b2] = build_pair(cs, 1);
    CHECK_EQ(frobenius_distance(a2, diag_matrix(std::vector<double>{0, 0, 1, 1})), 0.0);
    CHECK_EQ(frobenius_distance(b2, diag_matrix(std::vector<double>{5, 2, 1, 1})), 0.0);
}

TEST_CASE("ged_diagonalize: 2x2 diagonal pair is exact") {
    const GedDiagonalization g =
        ged_diagonalize(diag_matrix(std::vector<double>{1, 0}), diag_matrix(std::vector<double>{1, 2}));
    REQUIRE_EQ(g.lambda.size(), 2);
    CHECK_EQ(g.lambda[0], doctest::Approx(1.0).epsilon(1e-15));
    CHECK_EQ(g.lambda[1], doctest::Approx(0.0).epsilon(1e-15));
    CHECK_EQ(g.transform(0, 0).real(), doctest::Approx(1.0).epsilon(1e-15));
    CHECK_EQ(g.transform(1, 1).real(), doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_EQ(std::abs(g.transform(0, 1)), doctest::Approx(0.0).epsilon(1e-15));
    CHECK_EQ(std::abs(g.transform(1, 0)), doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("simultaneous_diagonalize: 2x2 diagonal pair is exact") {
    const PairDiagonalization p = simultaneous_diagonalize(diag_matrix(std::vector<double>{1, 0}),
                                                           diag_matrix(std::vector<double>{1, 2}));
    REQUIRE_EQ(p.signal_gains.size(), 2);
    CHECK_EQ(p.signal_gains[0], doctest::Approx(0.5).epsilon(1e-15));
    CHECK_EQ(p.signal_gains[1], doctest::Approx(0.0).epsilon(1e-15));
    CHECK_EQ(p.complement_gains[0], doctest::Approx(0.5).epsilon(1e-15));
    CHECK_EQ(p.complement_gains[1], doctest::Approx(1.0).epsilon(1e-15));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK_EQ(p.transform(0, 0).real(), doctest::Approx(r).epsilon(1e-15));
    CHECK_EQ(p.transform(1, 1).real(), doctest::Approx(r).epsilon(1e-15));
}

TEST_CASE("diagonal instance: spectra, precoders, SLNR values") {
    const ChannelSet cs = diagonal_instance();
    const auto [a, b] = build_pair(cs, 0);

    const GedDiagonalization g = ged_diagonalize(a, b);
    CHECK_EQ(g.lambda[0], doctest::Approx(4.0).epsilon(1e-14));
    CHECK_EQ(g.lambda[1], doctest::Approx(1.0).epsilon(1e-14));
    CHECK_EQ(g.lambda[2], doctest::Approx(0.0).epsilon(1e-14));

    const PairDiagonalization p = simultaneous_diagonalize(a, b);
    CHECK_EQ(p.signal_gains[0], doctest::Approx(0.8).epsilon(1e-14));
    CHECK_EQ(p.signal_gains[1], doctest::Approx(0.5).epsilon(1e-14));
    CHECK_EQ(p.signal_gains[2], doctest::Approx(0.0).epsilon(1e-14));

    // Spectrum link lambda_i = theta_i / (1 - theta_i).
    for (int i = 0; i < 2; ++i)
        CHECK_EQ(g.lambda[i],
                 doctest::Approx(p.signal_gains[i] / p.complement_gains[i]).epsilon(1e-12));

    const Precoder orig = original_precoder(cs, 0);
    CHECK_EQ(orig.scheme, Scheme::Original);
    CHECK_EQ(orig.user, 0);
    CHECK_EQ(orig.scale, doctest::Approx(1.0).epsilon(1e-14));
    CHECK_EQ(orig.matrix(0, 0).real(), doctest::Approx(1.0).epsilon(1e-14));
    CHECK_EQ(orig.matrix(1, 1).real(), doctest::Approx(1.0).epsilon(1e-14));
    CHECK_EQ(std::abs(orig.matrix(2, 0)), doctest::Approx(0.0).epsilon(1e-14));
    REQUIRE_EQ(orig.stream_gains.size(), 2);
    CHECK_EQ(orig.stream_gains[0], doctest::Approx(4.0).epsilon(1e-14));
    CHECK_EQ(orig.stream_gains[1], doctest::Approx(1.0).epsilon(1e-14));
    CHECK_EQ(slnr_value(cs, 0, orig.matrix), doctest::Approx(2.5).epsilon(1e-12));

    const Precoder prop = proposed_precoder(cs, 0);
    CHECK_EQ(prop.scheme, Scheme::Proposed);
    // gamma = sqrt(L / (1/5 + 1/2)) = sqrt(20/7).
    CHECK_EQ(prop.scale, doctest::Approx(std::sqrt(20.0 / 7.0)).epsilon(1e-14));
    CHECK_EQ(prop.matrix(0, 0).real(), doctest::Approx(std::sqrt(4.0 / 7.0)).epsilon(1e-14));
    CHECK_EQ(prop.matrix(1, 1).real(), doctest::Approx(std::sqrt(10.0 / 7.0)).epsilon(1e-14));
    CHECK_EQ(prop.stream_gains[0], doctest::Approx(0.8).epsilon(1e-14));
    CHECK_EQ(prop.stream_gains[1], doctest::Approx(0.5).epsilon(1e-14));
    CHECK_EQ(slnr_value(cs, 0, prop.matrix), doctest::Approx(13.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("random instances: joint-diagonalization identities") {
    const SystemDims dims{};
    const RngStream root(31);
    for (int i = 0; i < 25; ++i) {
        const ChannelSet cs = draw_channel_set(dims, i % 2 ? 0.05 : 2.0, root.split(i));
        const auto [a, b] = build_pair(cs, i % dims.users);
        const int n = a.rows();

        const GedDiagonalization g = ged_diagonalize(a, b);
        CHECK_LE(rel_diag_residual(g.transform, a, g.lambda, frobenius_norm(a)), 1e-8);
        const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
        CHECK_LE(rel_diag_residual(g.transform, b, ones, static_cast<double>(n)), 1e-8);

        const PairDiagonalization p = simultaneous_diagonalize(a, b);
        CHECK_LE(rel_diag_residual(p.transform, a, p.signal_gains, frobenius_norm(a)), 1e-8);
        CHECK_LE(rel_diag_residual(p.transform, b, p.complement_gains, frobenius_norm(b)), 1e-8);

        for (int j = 0; j < n; ++j) {
            CHECK_GE(p.signal_gains[static_cast<std::size_t>(j)], 0.0);
            CHECK_LT(p.signal_gains[static_cast<std::size_t>(j)], 1.0);
            if (j > 0) {
                CHECK_LE(p.signal_gains[static_cast<std::size_t>(j)],
                         p.signal_gains[static_cast<std::size_t>(j - 1)]);
                CHECK_GE(p.complement_gains[static_cast<std::size_t>(j)],
                         p.complement_gains[static_cast<std::size_t>(j - 1)]);
                CHECK_LE(g.lambda[static_cast<std::size_t>(j)], g.lambda[static_cast<std::size_t>(j - 1)]);
            }
        }
        // Rank pattern: A has rank M, so gains M.. vanish.
        for (int j = dims.rx_antennas; j < n; ++j) {
            CHECK_LE(p.signal_gains[static_cast<std::size_t>(j)], 1e-10);
            CHECK_LE(g.lambda[static_cast<std::size_t>(j)], 1e-8);
        }
        // Spectrum link on the rank support.
        for (int j = 0; j < dims.rx_antennas; ++j) {
            const double lam = g.lambda[static_cast<std::size_t>(j)];
            const double linked = p.signal_gains[static_cast<std::size_t>(j)] /
                                  p.complement_gains[static_cast<std::size_t>(j)];
            CHECK_LE(std::abs(lam - linked), 1e-8 * std::max(1.0, lam));
        }
    }
}

TEST_CASE("random instances: power constraint, SLNR identities, relaxation") {
    const RngStream root(32);
    for (int i = 0; i < 25; ++i) {
        SystemDims dims{};
        dims.streams = 1 + i % 3;
        const double sigma2 = (i % 4 == 0) ? 1e-3 : (i % 4 == 1 ? 0.1 : (i % 4 == 2 ? 1.0 : 10.0));
        const ChannelSet cs = draw_channel_set(dims, sigma2, root.split(i));
        const int k = i % dims.users;
        const int streams = dims.streams;

        const Precoder orig = make_precoder(cs, k, Scheme::Original);
        const Precoder prop = make_precoder(cs, k, Scheme::Proposed);
        CHECK_EQ(orig.matrix.cols(), streams);
        CHECK_EQ(prop.matrix.rows(), dims.tx_antennas);
        CHECK_LE(std::abs(frobenius_norm_sq(orig.matrix) - streams), 1e-10 * streams);
        CHECK_LE(std::abs(frobenius_norm_sq(prop.matrix) - streams), 1e-10 * streams);

        const GedDiagonalization g = ged_diagonalize(build_pair(cs, k).first, build_pair(cs, k).second);
        double lam_sum = 0.0;
        for (int j = 0; j < streams; ++j) lam_sum += g.lambda[static_cast<std::size_t>(j)];
        const double slnr_orig = slnr_value(cs, k, orig.matrix);
        CHECK_LE(std::abs(slnr_orig - lam_sum / streams), 1e-8 * std::max(1.0, lam_sum / streams));

        double th = 0.0, om = 0.0;
        for (int j = 0; j < streams; ++j) {
            th += prop.stream_gains[static_cast<std::size_t>(j)];
            om += 1.0 - prop.stream_gains[static_cast<std::size_t>(j)];
        }
        const double slnr_prop = slnr_value(cs, k, prop.matrix);
        CHECK_LE(std::abs(slnr_prop - th / om), 1e-8 * std::max(1.0, th / om));

        // Relaxation: the balanced precoder never exceeds the optimum.
        CHECK_LE(slnr_prop, slnr_orig * (1.0 + 1e-12) + 1e-15);
    }
}

TEST_CASE("L=1: the two schemes pick parallel beams") {
    const RngStream root(33);
    for (int i = 0; i < 10; ++i) {
        SystemDims dims{};
        dims.streams = 1;
        const ChannelSet cs = draw_channel_set(dims, 0.5, root.split(i));
        const Precoder orig = original_precoder(cs, 0);
        const Precoder prop = proposed_precoder(cs, 0);
        cx inner{0, 0};
        for (int r = 0; r < dims.tx_antennas; ++r)
            inner += std::conj(orig.matrix(r, 0)) * prop.matrix(r, 0);
        const double cosine = std::abs(inner) /
                              (frobenius_norm(orig.matrix) * frobenius_norm(prop.matrix));
        CHECK_LE(std::abs(1.0 - cosine), 1e-8);
    }
}

TEST_CASE("degenerate denominator and error propagation") {
    const ChannelSet cs = diagonal_instance();
    CHECK_THROWS_AS(slnr_value(cs, 0, CMatrix(4, 2)), DegenerateDenominator);

    // B not HPD propagates from the Cholesky factorization.
    CHECK_THROWS_AS(ged_diagonalize(diag_matrix(std::vector<double>{1, 1}),
                                    diag_matrix(std::vector<double>{1, -1})),
                    NotPositiveDefinite);
}
