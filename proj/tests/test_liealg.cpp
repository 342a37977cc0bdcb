#include "pkl/cxstruct.hpp"
#include "pkl/liealg.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace pkl;

namespace {
ComplexStructure eqs(int n, std::vector<std::string> lits) {
    std::vector<ComplexForm> d;
    for (const auto& s : lits) d.push_back(parse_form(n, s));
    return ComplexStructure::from_equations(n, d);
}
}  // namespace

TEST_CASE("jacobi violation witness") {
    LieAlgebra g(3);
    g.set_bracket(0, 1, {0, 0, 1});
    g.set_bracket(0, 2, {1, 0, 0});
    auto jc = check_jacobi(g);
    REQUIRE_FALSE(jc.ok);
    CHECK(jc.i == 0);
    CHECK(jc.j == 1);
    CHECK(jc.k == 2);
    CHECK(jc.residual == RationalVector{0, 0, -1});
}

TEST_CASE("iwasawa differential") {
    auto cs = eqs(3, {"0", "0", "a12"});
    auto f = cs.d(parse_form(3, "a3_b3"));
    CHECK(f == parse_form(3, "a12_b3 - a3_b12"));
}

TEST_CASE("kodaira thurston") {
    auto cs = eqs(2, {"0", "a1_b1"});
    CHECK(cs.d(parse_form(2, "a1_b2")).is_zero());
    auto s = ascending_series(cs);
    CHECK(s.classification == JClass::NILPOTENT);
    CHECK(s.terms[1].size() == 2);
    auto back = ComplexStructure::from_J(cs.algebra(), cs.J());
}

namespace {
RationalMatrix random_invertible(std::mt19937& rng, int m) {
    std::uniform_int_distribution<int> c(-2, 2);
    while (true) {
        RationalMatrix p(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) p(i, j) = c(rng);
        if (inverse(p)) return p;
    }
}
}  // namespace

TEST_CASE("heisenberg plus line invariants") {
    LieAlgebra g(4);
    g.set_bracket(0, 1, {0, 0, 1, 0});
    REQUIRE(check_jacobi(g).ok);
    auto inv = algebra_invariants(g);
    CHECK(inv.is_nilpotent);
    CHECK(inv.is_unimodular);
    CHECK(inv.center_basis.size() == 2);
    CHECK(inv.lower_central_series_dims == std::vector<int>{4, 1, 0});
    CHECK(inv.abelian_codim1_ideal.has_value());
}

TEST_CASE("unimodularity is basis independent") {
    // solvable, not unimodular: [e3,e1] = e1, [e3,e2] = 2 e2
    LieAlgebra g(3);
    g.set_bracket(2, 0, {1, 0, 0});
    g.set_bracket(2, 1, {0, 2, 0});
    // unimodular: [e3,e1] = e1, [e3,e2] = -e2
    LieAlgebra h(3);
    h.set_bracket(2, 0, {1, 0, 0});
    h.set_bracket(2, 1, {0, -1, 0});
    CHECK_FALSE(algebra_invariants(g).is_unimodular);
    CHECK(algebra_invariants(h).is_unimodular);
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_invertible(rng, 3);
        auto g2 = g.change_basis(p);
        auto h2 = h.change_basis(p);
        CHECK(check_jacobi(g2).ok);
        CHECK_FALSE(algebra_invariants(g2).is_unimodular);
        CHECK(algebra_invariants(h2).is_unimodular);
        CHECK_FALSE(algebra_invariants(h2).is_nilpotent);
    }
}

TEST_CASE("d squared vanishes and commutes with conjugation") {
    auto cs = eqs(3, {"0", "a1_b1", "a12 + a1_b2 + i a2_b1"});
    REQUIRE(check_jacobi(cs.algebra()).ok);
    auto& d = cs.differential();
    for (const char* s : {"a1", "a2_b1", "a3_b3", "i a23_b1 - b3", "a13_b23"}) {
        auto f = parse_form(3, s);
        CHECK(d(d(f)).is_zero());
        CHECK(conjugate(d(f)) == d(conjugate(f)));
    }
}

TEST_CASE("differential round trip") {
    LieAlgebra g(4);
    g.set_bracket(0, 1, {0, 0, 1, 0});
    g.set_bracket(0, 2, {0, 0, 0, 1});
    std::vector<ComplexForm> de;
    for (int k = 0; k < 4; ++k) de.push_back(g.d_generator(k));
    CHECK(LieAlgebra::from_differential(de) == g);
    CHECK(de[2] == -parse_real_form(4, "e1^e2"));
    CHECK(algebra_from_json(algebra_to_json(g)) == g);
}

TEST_CASE("integrability tests agree") {
    std::mt19937 rng(5);
    int integrable = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto cs = eqs(2, {"0", trial % 2 ? "a1_b1" : "a12"});
        auto p = random_invertible(rng, 4);
        auto g = cs.algebra().change_basis(p);
        auto j = *inverse(p) * cs.J() * p;
        auto ic = check_integrability(g, j);
        CHECK(ic.integrable);
        integrable += ic.integrable;
    }
    CHECK(integrable == 30);
    // a J that rotates e1 into e3 on the Heisenberg-type algebra is not integrable
    LieAlgebra h(4);
    h.set_bracket(0, 1, {0, 0, 1, 0});
    RationalMatrix j(4, 4);
    j(2, 0) = 1; j(0, 2) = -1;
    j(3, 1) = 1; j(1, 3) = -1;
    auto ic = check_integrability(h, j);
    CHECK_FALSE(ic.integrable);
    CHECK(std::any_of(ic.nijenhuis.begin(), ic.nijenhuis.end(), [](const Rational& r) { return r != 0; }));
    CHECK_THROWS_AS(ComplexStructure::from_J(h, j), InvalidStructure);
}

TEST_CASE("salamon basis reorders") {
    // iwasawa with alpha^3 listed first
    auto cs = eqs(3, {"a23", "0", "0"});
    auto b = salamon_basis(cs);
    CHECK(b.closed == 2);
    auto cs2 = cs.with_coframe(b.t);
    CHECK(cs2.dalpha(0).is_zero());
    CHECK(cs2.dalpha(1).is_zero());
    CHECK_FALSE(cs2.dalpha(2).is_zero());
    CHECK(salamon_basis(eqs(3, {"0", "0", "0"})).closed == 3);
}

TEST_CASE("kodaira thurston from real brackets") {
    // [e1,e2] = -e4 in the model alpha^1 = e^1 + i e^2, alpha^2 = e^3 + i e^4
    auto kt = eqs(2, {"0", "a1_b1"});
    auto back = ComplexStructure::from_J(kt.algebra(), kt.J());
    CHECK(back.dalpha(0).is_zero());
    auto d2 = back.dalpha(1);
    CHECK(d2.size() == 1);
    CHECK(d2.terms().begin()->first == to_mask(2, {{1}, {1}}));
}
