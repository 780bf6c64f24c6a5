#include "doctest.h"

#include <cmath>
#include <limits>

#include "lbeam/cmatrix.hpp"

using namespace lbeam;

TEST_CASE("construction, shape, and element access") {
    CMatrix m(2, 3);
    CHECK_EQ(m.rows(), 2);
    CHECK_EQ(m.cols(), 3);
    CHECK_EQ(m(1, 2), cx{0.0, 0.0});
    m(0, 1) = cx{1.0, -2.0};
    CHECK_EQ(m.at(0, 1), cx{1.0, -2.0});
    CHECK_THROWS_AS(m.at(2, 0), std::out_of_range);
    CHECK_THROWS_AS(m.at(0, 3), std::out_of_range);
    CHECK_THROWS_AS(m.at(-1, 0), std::out_of_range);
    CHECK_THROWS_AS(CMatrix(-1, 2), std::invalid_argument);

    CHECK(CMatrix().empty());
    CHECK_FALSE(m.empty());
}

TEST_CASE("identity and diag_matrix") {
    const CMatrix i3 = CMatrix::identity(3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK_EQ(i3(r, c), (r == c ? cx{1, 0} : cx{0, 0}));

    const CMatrix d = diag_matrix(std::vector<double>{2.0, -3.0});
    CHECK_EQ(d(0, 0), cx{2, 0});
    CHECK_EQ(d(1, 1), cx{-3, 0});
    CHECK_EQ(d(0, 1), cx{0, 0});

    const CMatrix dc = diag_matrix(std::vector<cx>{cx{0, 1}});
    CHECK_EQ(dc(0, 0), cx{0, 1});
}

TEST_CASE("arithmetic matches hand-computed values") {
    CMatrix a(2, 2);
    a(0, 0) = cx{1, 1};
    a(0, 1) = cx{2, 0};
    a(1, 0) = cx{0, 3};
    a(1, 1) = cx{4, 0};
    CMatrix ones(2, 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) ones(r, c) = cx{1, 0};

    const CMatrix p = a * ones;
    CHECK_EQ(p(0, 0), cx{3, 1});
    CHECK_EQ(p(0, 1), cx{3, 1});
    CHECK_EQ(p(1, 0), cx{4, 3});
    CHECK_EQ(p(1, 1), cx{4, 3});

    const CMatrix s = a + a;
    CHECK_EQ(s(1, 0), cx{0, 6});
    const CMatrix z = a - a;
    CHECK_EQ(frobenius_norm(z), 0.0);

    const CMatrix sc = cx{0, 1} * a;
    CHECK_EQ(sc(0, 0), cx{-1, 1});
    const CMatrix sd = 2.0 * a;
    CHECK_EQ(sd(1, 1), cx{8, 0});

    CMatrix acc = a;
    acc += a;
    CHECK_EQ(acc(0, 1), cx{4, 0});
    acc -= a;
    CHECK_EQ(acc(0, 1), cx{2, 0});

    CHECK_THROWS_AS(a + CMatrix(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(a * CMatrix(3, 3), std::invalid_argument);
}

TEST_CASE("adjoint, transpose, conj") {
    CMatrix a(2, 3);
    a(0, 0) = cx{1, 1};
    a(1, 2) = cx{0, -5};
    const CMatrix ah = a.adjoint();
    CHECK_EQ(ah.rows(), 3);
    CHECK_EQ(ah.cols(), 2);
    CHECK_EQ(ah(0, 0), cx{1, -1});
    CHECK_EQ(ah(2, 1), cx{0, 5});
    const CMatrix at = a.transpose();
    CHECK_EQ(at(2, 1), cx{0, -5});
    const CMatrix ac = a.conj();
    CHECK_EQ(ac(1, 2), cx{0, 5});
}

TEST_CASE("block, columns, matvec") {
    CMatrix a(3, 3);
    int v = 0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a(r, c) = cx{static_cast<double>(v++), 0};

    const CMatrix b = a.block(1, 1, 2, 2);
    CHECK_EQ(b(0, 0), cx{4, 0});
    CHECK_EQ(b(1, 1), cx{8, 0});
    CHECK_THROWS_AS(a.block(2, 2, 2, 2), std::out_of_range);

    const CMatrix lead = a.leading_columns(2);
    CHECK_EQ(lead.cols(), 2);
    CHECK_EQ(lead(2, 1), cx{7, 0});

    const std::vector<cx> col = a.column(2);
    CHECK_EQ(col.size(), 3);
    CHECK_EQ(col[1], cx{5, 0});

    CMatrix c(2, 2);
    c.set_column(0, {cx{9, 0}, cx{8, 0}});
    CHECK_EQ(c(1, 0), cx{8, 0});
    CHECK_THROWS_AS(c.set_column(0, {cx{1, 0}}), std::invalid_argument);

    const std::vector<cx> y = matvec(a, {cx{1, 0}, cx{0, 0}, cx{1, 0}});
    CHECK_EQ(y[0], cx{2, 0});
    CHECK_EQ(y[2], cx{14, 0});
    CHECK_THROWS_AS(matvec(a, std::vector<cx>(2)), std::invalid_argument);
}

TEST_CASE("trace and norms") {
    CMatrix a(2, 2);
    a(0, 0) = cx{1, 2};
    a(1, 1) = cx{3, -1};
    a(0, 1) = cx{0, 2};
    CHECK_EQ(trace(a), cx{4, 1});
    CHECK_EQ(frobenius_norm_sq(a), doctest::Approx(5.0 + 10.0 + 4.0));
    CHECK_EQ(frobenius_norm(a), doctest::Approx(std::sqrt(19.0)));

    CMatrix b = a;
    b(0, 1) = cx{0, 0};
    CHECK_EQ(frobenius_distance(a, b), doctest::Approx(2.0));
    CHECK_THROWS_AS(frobenius_distance(a, CMatrix(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(trace(CMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("all_finite flags NaN and infinity") {
    CMatrix a(2, 2);
    CHECK(all_finite(a));
    a(0, 1) = cx{std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_FALSE(all_finite(a));
    a(0, 1) = cx{0.0, std::numeric_limits<double>::infinity()};
    CHECK_FALSE(all_finite(a));
}
