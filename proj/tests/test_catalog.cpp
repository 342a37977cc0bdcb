#include "pkl/catalog.hpp"
#include "pkl/form_io.hpp"
#include "pkl/pkahler.hpp"

#include <doctest.h>

using namespace pkl;

namespace {
AlmostAbelianData rotation3(const RationalVector& v = {0, 0, 0, 0}) {
    // n = 3, a_1 = span(e2..e5), J e2 = e5, J e3 = e4; rotations at speeds 1 and 2
    AlmostAbelianData d;
    d.n = 3;
    d.lambda = 0;
    d.v = v;
    d.A = RationalMatrix::from_rows({{0, 0, 0, -1}, {0, 0, -2, 0}, {0, 2, 0, 0}, {1, 0, 0, 0}});
    return d;
}

RationalMatrix commuting(int n, const RationalMatrix& m) {
    auto j = almost_abelian_j1(n);
    return Rational(1, 2) * (m - j * m * j);
}
}  // namespace

TEST_CASE("snn8 instances") {
    auto cs = build_snn8(1, {0, 0, 1, 0});
    CHECK(ascending_series(cs).classification == JClass::SNN);
    CHECK(ascending_series(build_snn8(2, {0, 1, 0, 0, 0})).classification == JClass::SNN);
    CHECK_THROWS_AS(build_snn8(1, {1, 1, 0, 0}), CatalogError);
    CHECK_THROWS_AS(build_snn8(1, {0, 0, 1, 0}, 2), CatalogError);
    CHECK_THROWS_AS(build_snn8(2, {0, 0, 0, 0, 0}), CatalogError);
    CHECK(snn8_samples(1).size() > 10);
    for (const auto& t : snn8_samples(2, 2))
        CHECK(ascending_series(build_snn8(2, t)).classification == JClass::SNN);
}

TEST_CASE("family obstructions") {
    for (int delta : {1, -1})
        for (const auto& t : snn8_samples(1, 3)) {
            auto cs = build_snn8(1, t, delta);
            ParamMap pm{{"pa", Scalar(t[2])}, {"pb", Scalar(t[3])}};
            auto beta = parse_form(4, "pb a14_b1 - pa a13_b2", pm);
            auto cert = obstruction_check(cs, 2, beta);
            Rational s = t[2] * t[2] + t[3] * t[3];
            CHECK(cert.d_beta == Scalar(s) * parse_form(4, "a12_b12"));
        }
    for (const auto& t : snn8_samples(2, 3)) {
        auto cs = build_snn8(2, t);
        ParamMap pm{{"omu", Scalar(1 - t[1])}};
        auto beta = parse_form(4, "a14_b1 + omu a12_b3", pm);
        auto cert = obstruction_check(cs, 2, beta);
        Rational s = t[0] - t[0] * t[1] - t[1];
        CHECK(s != 0);
        CHECK(cert.d_beta == Scalar(s) * parse_form(4, "a12_b12"));
    }
}

TEST_CASE("almost abelian equations") {
    // d alpha^1 = i/2 lambda a1_b1,
    // d alpha^j = i/2 w_j a1_b1 + (alpha^1 - conj alpha^1)/2 ^ sum_k b_jk alpha^k
    AlmostAbelianData d;
    d.n = 3;
    d.A = commuting(3, RationalMatrix::from_rows({{1, 2, 5, 0}, {3, -4, 0, 5}, {0, -5, -4, -3}, {5, 0, 2, -1}}));
    REQUIRE(d.A * almost_abelian_j1(3) == almost_abelian_j1(3) * d.A);
    d.lambda = 3;
    d.v = {1, -2, 1, Rational(1, 2)};
    auto cs = build_almost_abelian(d);
    const int n = 3;
    auto a_ = [&](int j, int k) { return d.A(j - 2, k - 2); };  // 1-based in e_2..e_{2n-1}
    auto v_ = [&](int j) { return d.v[j - 2]; };
    ComplexForm half_1 = Scalar(Rational(1, 2)) * (alpha(n, 1) - alpha_bar(n, 1));
    CHECK(cs.dalpha(0) == Scalar(Rational(0), d.lambda / 2) * wedge(alpha(n, 1), alpha_bar(n, 1)));
    for (int j = 2; j <= n; ++j) {
        Scalar w(v_(j), v_(2 * n + 1 - j));
        ComplexForm sum(2 * n);
        for (int k = 2; k <= n; ++k) {
            Scalar b(-a_(2 * n + 1 - j, k), a_(j, k));
            sum += b * alpha(n, k);
        }
        ComplexForm expected = Scalar::i() * Scalar(Rational(1, 2)) * w * wedge(alpha(n, 1), alpha_bar(n, 1)) +
                               wedge(half_1, sum);
        CHECK(cs.dalpha(j - 1) == expected);
    }
    auto back = read_almost_abelian(cs);
    CHECK(back.lambda == d.lambda);
    CHECK(back.v == d.v);
    CHECK(back.A == d.A);
}

TEST_CASE("almost abelian kahler decision") {
    auto d = rotation3();
    CHECK(d.is_unimodular());
    auto k = kahler_decision_almost_abelian(d);
    REQUIRE(k.kahler);
    auto cs = build_almost_abelian(d);
    REQUIRE(k.omega);
    CHECK(cs.d(*k.omega).is_zero());
    CHECK(check_transverse(*k.omega, 1).status == Transversality::TRANSVERSE);

    // v in the image of A is absorbed
    auto dv = rotation3({1, 2, 0, 3});
    auto kv = kahler_decision_almost_abelian(dv);
    REQUIRE(kv.kahler);
    auto csv = build_almost_abelian(dv);
    CHECK(csv.d(*kv.omega).is_zero());
    CHECK(check_transverse(*kv.omega, 1).status == Transversality::TRANSVERSE);

    AlmostAbelianData h;
    h.n = 3;
    h.A = RationalMatrix(4, 4);
    h.v = {1, 0, 0, 0};
    CHECK_FALSE(kahler_decision_almost_abelian(h).kahler);

    AlmostAbelianData s;
    s.n = 3;
    s.A = RationalMatrix::from_rows({{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}});
    s.v = {0, 0, 0, 0};
    REQUIRE(s.A * almost_abelian_j1(3) == almost_abelian_j1(3) * s.A);
    CHECK_FALSE(kahler_decision_almost_abelian(s).kahler);

    AlmostAbelianData bad = rotation3();
    bad.A(0, 0) = 1;
    CHECK_THROWS_AS(build_almost_abelian(bad), InvalidStructure);
}

TEST_CASE("spectrum test") {
    CHECK(semisimple_imaginary(RationalMatrix::from_rows({{0, -2}, {2, 0}})));
    CHECK(semisimple_imaginary(RationalMatrix(3, 3)));
    CHECK_FALSE(semisimple_imaginary(RationalMatrix::from_rows({{0, 1}, {0, 0}})));
    CHECK_FALSE(semisimple_imaginary(RationalMatrix::from_rows({{1, 0}, {0, -1}})));
    // not skew but similar to a rotation
    CHECK(semisimple_imaginary(RationalMatrix::from_rows({{1, -2}, {1, -1}})));
    CHECK(sturm_count({-2, 0, 1}, -10, 10) == 2);
}

TEST_CASE("named examples") {
    CHECK(named_example("torus4").n() == 4);
    CHECK(named_example("iwasawa").algebra().dim() == 6);
    CHECK(ascending_series(named_example("kt")).classification == JClass::NILPOTENT);
    for (const auto& e : catalog_list()) {
        if (e.name.find('<') != std::string::npos || e.name.find(':') != std::string::npos) continue;
        auto cs = named_example(e.name);
        CHECK(check_jacobi(cs.algebra()).ok);
        CHECK(check_integrability(cs.algebra(), cs.J()).integrable);
    }
    CHECK_THROWS_AS(named_example("nope"), CatalogError);
    CHECK(named_example("snn8f1:0,0,1,0").n() == 4);
}
