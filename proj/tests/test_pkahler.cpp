#include "pkl/catalog.hpp"
#include "pkl/form_io.hpp"
#include "pkl/pkahler.hpp"

#include <doctest.h>

#include <algorithm>

using namespace pkl;

namespace {
ComplexStructure eqs(int n, std::vector<std::string> lits) {
    std::vector<ComplexForm> d;
    for (const auto& s : lits) d.push_back(parse_form(n, s));
    return ComplexStructure::from_equations(n, d);
}

PKahlerOptions small_budget() {
    PKahlerOptions o;
    o.search.restarts = 20;
    o.search.steps = 200;
    o.search.seed = 3;
    return o;
}
}  // namespace

TEST_CASE("real pp basis is real and sized") {
    auto b = real_pp_basis(3, 1);
    CHECK(b.size() == 9);
    for (const auto& f : b) CHECK(is_real(f));
}

TEST_CASE("torus is p-kahler for every p") {
    auto cs = eqs(4, {"0", "0", "0", "0"});
    for (int p = 1; p < 4; ++p) {
        auto r = find_pkahler(cs, p, small_budget());
        CHECK(r.verdict == PKVerdict::FOUND);
        CHECK(verify_report(cs, r));
    }
}

TEST_CASE("kodaira thurston is not kahler") {
    auto cs = eqs(2, {"0", "a1_b1"});
    auto cone = closed_pp_space(cs, 1);
    CHECK(cone.basis.size() == 3);
    auto r = find_pkahler(cs, 1, small_budget());
    REQUIRE(r.verdict == PKVerdict::REFUTED);
    CHECK(verify_report(cs, r));
    // tampered multipliers must not verify
    auto bad = r;
    for (auto& u : bad.refutation->multipliers) u = u == 0 ? Rational(1) : Rational(0);
    CHECK_FALSE(verify_report(cs, bad));
}

TEST_CASE("iwasawa is balanced but not kahler") {
    auto cs = eqs(3, {"0", "0", "a12"});
    auto r2 = find_pkahler(cs, 2, small_budget());
    CHECK(r2.verdict == PKVerdict::FOUND);
    CHECK(verify_report(cs, r2));
    auto r1 = find_pkahler(cs, 1, small_budget());
    CHECK(r1.verdict == PKVerdict::REFUTED);
    CHECK(verify_report(cs, r1));

    auto st = stnilp_degree(cs);
    CHECK(st.t == 2);
    REQUIRE(st.forbidden_p);
    CHECK(*st.forbidden_p == 1);
}

TEST_CASE("obstruction on iwasawa") {
    auto cs = eqs(3, {"0", "0", "a12"});
    auto cert = obstruction_search(cs, 1);
    REQUIRE(cert);
    CHECK(verify_obstruction(cs, *cert));
    auto bad = *cert;
    bad.decomposition[0].c = -bad.decomposition[0].c;
    CHECK_FALSE(verify_obstruction(cs, bad));
    // a closed beta has nothing to offer
    CHECK_THROWS_AS(obstruction_check(cs, 1, parse_form(3, "a12_b1")), ObstructionRejected);
}

TEST_CASE("closed space of the torus is everything") {
    auto t = named_example("torus3");
    CHECK(closed_pp_space(t, 1).basis.size() == 9);
    CHECK(closed_pp_space(t, 2).basis.size() == 9);
    CHECK(closed_pp_space(named_example("torus4"), 2).basis.size() == 36);
    for (const auto& b : closed_pp_space(named_example("iwasawa"), 2).basis) {
        CHECK(is_real(b));
        CHECK(named_example("iwasawa").d(b).is_zero());
    }
}

TEST_CASE("torus needs no obstruction") {
    auto t = named_example("torus3");
    CHECK_THROWS_AS(obstruction_check(t, 1, parse_form(3, "a12_b1")), ObstructionRejected);
    CHECK_FALSE(obstruction_search(t, 1).has_value());
    CHECK_FALSE(obstruction_search(named_example("torus4"), 2).has_value());
}

TEST_CASE("obstruction search on the first family") {
    for (const auto& t : snn8_samples(1, 2)) {
        auto cs = build_snn8(1, t);
        auto cert = obstruction_search(cs, 2);
        REQUIRE(cert.has_value());
        CHECK(verify_obstruction(cs, *cert));
        CHECK_FALSE(cert->d_beta_component.is_zero());
    }
}

TEST_CASE("stnilp degrees") {
    auto cs = eqs(4, {"0", "0", "a12", "a1_b2 + a2_b1"});
    auto r = stnilp_degree(cs);
    CHECK(r.t == 2);
    REQUIRE(r.forbidden_p.has_value());
    CHECK(*r.forbidden_p == 2);
    CHECK(find_pkahler(cs, 2, small_budget()).verdict != PKVerdict::FOUND);

    auto ab = stnilp_degree(named_example("torus3"));
    CHECK(ab.t == 3);
    CHECK_FALSE(ab.forbidden_p.has_value());

    for (const auto& [name, t] : std::vector<std::pair<std::string, int>>{{"n4t1", 1}, {"n4t2", 2}, {"n4t3", 3}}) {
        auto s = stnilp_degree(named_example(name));
        CHECK(s.t == t);
        CHECK(find_pkahler(named_example(name), 4 - t, small_budget()).verdict != PKVerdict::FOUND);
    }
}

TEST_CASE("eight dimensional nilpotent instances are not 2-kahler") {
    for (const auto& name : {"qn8a", "qn8b", "qn8c", "qn8d"}) {
        auto cs = named_example(name);
        auto r = find_pkahler(cs, 2, small_budget());
        CHECK(r.verdict != PKVerdict::FOUND);
        if (r.verdict == PKVerdict::REFUTED) CHECK(verify_report(cs, r));
    }
    auto r = find_pkahler(named_example("torus4"), 2, small_budget());
    CHECK(r.verdict == PKVerdict::FOUND);
}

TEST_CASE("found forms restrict to ideals") {
    for (const auto& [name, p] : std::vector<std::pair<std::string, int>>{{"iwasawa", 2}, {"torus4", 2}, {"torus4", 3}}) {
        auto cs = named_example(name);
        auto r = find_pkahler(cs, p, small_budget());
        REQUIRE(r.verdict == PKVerdict::FOUND);
        auto red = restrict_to_jinvariant_ideal(cs, *r.form, alpha(cs.n(), 1));
        CHECK(red.h.d(red.omega).is_zero());
        auto v = check_transverse(red.omega, p);
        CHECK(v.status == Transversality::TRANSVERSE);
        CHECK(verify_verdict(red.omega, p, v));
    }
}
