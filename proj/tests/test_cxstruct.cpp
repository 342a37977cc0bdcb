#include "pkl/catalog.hpp"
#include "pkl/cxstruct.hpp"
#include "pkl/pkahler.hpp"

#include <doctest.h>

using namespace pkl;

namespace {
ComplexStructure eqs(int n, std::vector<std::string> lits) {
    std::vector<ComplexForm> d;
    for (const auto& s : lits) d.push_back(parse_form(n, s));
    return ComplexStructure::from_equations(n, d);
}

bool closed_and_transverse(const ComplexStructure& cs, const ComplexForm& f, int p) {
    if (!cs.d(f).is_zero()) return false;
    auto v = check_transverse(f, p);
    return v.status == Transversality::TRANSVERSE && verify_verdict(f, p, v);
}
}  // namespace

TEST_CASE("abelian structures") {
    auto t = named_example("torus3");
    auto s = ascending_series(t);
    CHECK(s.classification == JClass::NILPOTENT);
    CHECK(s.terms[1].size() == 6);
    CHECK(salamon_basis(t).closed == 3);
    RationalMatrix j = t.J();
    CHECK(check_integrability(t.algebra(), j).integrable);
}

TEST_CASE("snn family instance") {
    auto cs = build_snn8(1, {0, 0, 1, 0});
    auto s = ascending_series(cs);
    CHECK(s.terms.size() == 1);
    CHECK(s.classification == JClass::SNN);
    CHECK_THROWS(b_extension_quotient(cs, divided_power(standard_kahler(4), 2)));
}

TEST_CASE("kodaira thurston ascending series") {
    auto kt = eqs(2, {"0", "a1_b1"});
    auto s = ascending_series(kt);
    REQUIRE(s.terms[1].size() == 2);
    // the real and imaginary parts of Z_2 are e_3, e_4 in the model coframe
    auto basis = span_basis(s.terms[1], 4);
    CHECK(basis == span_basis({{0, 0, 1, 0}, {0, 0, 0, 1}}, 4));
}

TEST_CASE("series chain is monotone and J-invariant") {
    for (const auto& name : {"iwasawa", "kt", "n4t1", "n4t2", "qn8a", "qn8d"}) {
        auto cs = named_example(name);
        auto s = ascending_series(cs);
        std::size_t prev = 0;
        for (std::size_t k = 1; k < s.terms.size(); ++k) {
            CHECK(s.terms[k].size() >= prev);
            prev = s.terms[k].size();
            std::vector<RationalVector> joined = s.terms[k];
            for (const auto& x : s.terms[k]) joined.push_back(cs.J() * x);
            CHECK(span_basis(joined, cs.algebra().dim()).size() == s.terms[k].size());
        }
        CHECK(s.stabilization <= cs.algebra().dim());
    }
}

TEST_CASE("almost abelian integrability") {
    AlmostAbelianData d;
    d.n = 2;
    d.lambda = 0;
    d.v = {0, 0};
    d.A = RationalMatrix::from_rows({{1, 0}, {0, 0}});
    CHECK_THROWS(require_integrable(d));
    CHECK_THROWS(build_almost_abelian(d));
    d.A = RationalMatrix::from_rows({{1, 0}, {0, 1}});
    CHECK_NOTHROW(build_almost_abelian(d));
}

TEST_CASE("restriction to the ideal of the torus") {
    auto t = named_example("torus4");
    auto omega = divided_power(standard_kahler(4), 2);
    auto red = restrict_to_jinvariant_ideal(t, omega, alpha(4, 1));
    CHECK(red.h.n() == 3);
    CHECK(red.h.algebra().is_abelian());
    CHECK(red.omega == divided_power(standard_kahler(3), 2));
    CHECK(closed_and_transverse(red.h, red.omega, 2));
}

TEST_CASE("restriction on iwasawa") {
    auto cs = named_example("iwasawa");
    auto omega = divided_power(standard_kahler(3), 2);
    REQUIRE(cs.d(omega).is_zero());
    auto red = restrict_to_jinvariant_ideal(cs, omega, alpha(3, 1));
    CHECK(red.h.n() == 2);
    CHECK(red.h.algebra().is_abelian());
    CHECK(red.h.d(red.omega).is_zero());
    CHECK(closed_and_transverse(red.h, red.omega, 2));

    // a form with no pure part on the ideal restricts to zero
    auto mixed = parse_form(3, "i a1_b1");
    auto red0 = restrict_to_jinvariant_ideal(cs, mixed, alpha(3, 1));
    CHECK(red0.omega.is_zero());

    CHECK_THROWS(restrict_to_jinvariant_ideal(cs, omega, alpha(3, 3)));
    CHECK_THROWS(restrict_to_jinvariant_ideal(cs, omega, ComplexForm(6)));
}

TEST_CASE("restriction keeps closed forms closed") {
    auto cs = named_example("iwasawa");
    auto cone = closed_pp_space(cs, 2);
    REQUIRE_FALSE(cone.basis.empty());
    for (const auto& b : cone.basis) {
        auto red = restrict_to_jinvariant_ideal(cs, b, alpha(3, 2));
        CHECK(red.h.d(red.omega).is_zero());
    }
}

TEST_CASE("quotient of the torus") {
    auto t = named_example("torus3");
    auto q = b_extension_quotient(t, divided_power(standard_kahler(3), 2));
    CHECK(q.k.n() == 2);
    CHECK(q.k.algebra().is_abelian());
    CHECK(closed_and_transverse(q.k, q.omega, 1));
}

TEST_CASE("quotient of a central extension") {
    auto plus = eqs(3, {"0", "0", "a1_b1 + a2_b2"});
    auto refuted = find_pkahler(plus, 2);
    CHECK(refuted.verdict == PKVerdict::REFUTED);
    CHECK(verify_report(plus, refuted));

    auto cs = eqs(3, {"0", "0", "a1_b1 - a2_b2"});
    auto found = find_pkahler(cs, 2);
    REQUIRE(found.verdict == PKVerdict::FOUND);
    auto q = b_extension_quotient(cs, *found.form);
    CHECK(q.k.n() == 2);
    CHECK(q.k.algebra().is_abelian());
    CHECK(q.k.d(q.omega).is_zero());
    CHECK(check_transverse(q.omega, 1).status == Transversality::TRANSVERSE);
}

TEST_CASE("quotient keeps closed forms closed") {
    auto cs = named_example("iwasawa");
    for (const auto& b : closed_pp_space(cs, 2).basis) {
        auto q = b_extension_quotient(cs, b);
        CHECK(q.k.d(q.omega).is_zero());
    }
}
