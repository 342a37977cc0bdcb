// Acceptance suite: one PASS/FAIL line per criterion.

#include "pkl/catalog.hpp"
#include "pkl/form_io.hpp"
#include "pkl/pkahler.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace pkl;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void fail(const std::string& why) {
        if (pass) detail << "first failure: " << why << "; ";
        pass = false;
    }
};

std::mt19937_64 rng(20240607);

long rand_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Rational rand_rational(long lo, long hi, long den = 3) {
    return Rational(rand_int(lo * den, hi * den), den);
}

Scalar rand_gaussian(long r) { return Scalar(Rational(rand_int(-r, r)), Rational(rand_int(-r, r))); }

RationalMatrix commuting(int n, const RationalMatrix& m) {
    auto j = almost_abelian_j1(n);
    return Rational(1, 2) * (m - j * m * j);
}

RationalMatrix rand_matrix(std::size_t m, long r) {
    RationalMatrix a(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a(i, j) = rand_int(-r, r);
    return a;
}

RationalMatrix rand_skew(std::size_t m, long r) {
    RationalMatrix k(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            k(i, j) = rand_int(-r, r);
            k(j, i) = -k(i, j);
        }
    return k;
}

// random invertible matrix commuting with J_1
RationalMatrix rand_commuting_invertible(int n) {
    const std::size_t m = 2 * n - 2;
    for (;;) {
        RationalMatrix p = commuting(n, rand_matrix(m, 2)) + RationalMatrix::identity(m);
        if (determinant(p) != 0) return p;
    }
}

AlmostAbelianData conjugate_data(const AlmostAbelianData& d, const RationalMatrix& p) {
    AlmostAbelianData out = d;
    auto pi = inverse(p);
    out.A = p * d.A * *pi;
    out.v = p * d.v;
    return out;
}

RationalVector rand_vector(std::size_t m, long r) {
    RationalVector v(m);
    for (auto& x : v) x = rand_int(-r, r);
    return v;
}

// Kahler type: v in the image of a J_1-commuting skew A, hidden by a conjugation
AlmostAbelianData kahler_type(int n) {
    const std::size_t m = 2 * n - 2;
    AlmostAbelianData d;
    d.n = n;
    d.A = commuting(n, rand_skew(m, 2));
    d.v = d.A * rand_vector(m, 2);
    d.lambda = 0;
    return conjugate_data(d, rand_commuting_invertible(n));
}

// skew A vanishing on the first J_1-pair, v outside its image
AlmostAbelianData rank_violating(int n) {
    const std::size_t m = 2 * n - 2;
    RationalMatrix k = rand_skew(m, 2);
    for (std::size_t t = 0; t < m; ++t) {
        k(0, t) = k(t, 0) = 0;
        k(m - 1, t) = k(t, m - 1) = 0;
    }
    AlmostAbelianData d;
    d.n = n;
    d.A = commuting(n, k);
    d.v = rand_vector(m, 2);
    d.v[0] = rand_int(1, 3);
    d.lambda = 0;
    return rand_int(0, 1) ? conjugate_data(d, rand_commuting_invertible(n)) : d;
}

AlmostAbelianData generic_type(int n) {
    const std::size_t m = 2 * n - 2;
    AlmostAbelianData d;
    d.n = n;
    d.A = commuting(n, rand_matrix(m, 2));
    Rational tr = 0;
    for (std::size_t k = 0; k < m; ++k) tr += d.A(k, k);
    d.lambda = -tr;
    d.v = rand_vector(m, 2);
    return d;
}

void report(int k, const std::string& title, Outcome& o, double secs) {
    std::cout << "CRITERION " << k << " [" << title << "]: " << (o.pass ? "PASS" : "FAIL") << " (" << secs
              << " s) " << o.detail.str() << std::endl;
}

// ---- 1, 2: obstruction reproduction ----

Outcome family_obstruction(int family) {
    Outcome o;
    ComplexForm target = parse_form(4, "a12_b12");
    int count = 0;
    for (int delta : family == 1 ? std::vector<int>{1, -1} : std::vector<int>{1})
        for (const auto& t : snn8_samples(family, 5)) {
            auto cs = build_snn8(family, t, delta);
            ComplexForm beta(8);
            Rational expected;
            if (family == 1) {
                ParamMap pm{{"pa", Scalar(t[2])}, {"pb", Scalar(t[3])}};
                beta = parse_form(4, "pb a14_b1 - pa a13_b2", pm);
                expected = t[2] * t[2] + t[3] * t[3];
            } else {
                ParamMap pm{{"omu", Scalar(1 - t[1])}};
                beta = parse_form(4, "a14_b1 + omu a12_b3", pm);
                expected = t[0] - t[0] * t[1] - t[1];
                if (expected == 0) o.fail("zero coefficient");
            }
            try {
                auto cert = obstruction_check(cs, 2, beta);
                if (!(cert.d_beta == Scalar(expected) * target)) o.fail("d beta = " + format_form(cert.d_beta));
                if (!verify_obstruction(cs, cert)) o.fail("certificate does not verify");
            } catch (const std::exception& e) {
                o.fail(e.what());
            }
            ++count;
        }
    o.detail << count << " instances";
    return o;
}

// ---- 3: 8-dimensional nilpotent consistency ----

Outcome eight_dim() {
    Outcome o;
    std::vector<std::string> names;
    auto f1 = snn8_samples(1, 5);
    auto f2 = snn8_samples(2, 5);
    auto tuple_name = [](int fam, const std::vector<Rational>& t, int delta) {
        std::string s = "snn8f" + std::to_string(fam) + ":";
        for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + to_string(t[k]);
        if (delta == -1) s += ",-1";
        return s;
    };
    for (std::size_t k = 0; k < f1.size(); k += 5) names.push_back(tuple_name(1, f1[k], k % 2 ? -1 : 1));
    for (std::size_t k = 0; k < f2.size(); k += 5) names.push_back(tuple_name(2, f2[k], 1));
    for (const char* s : {"kt4", "iwasawa4", "qn8a", "qn8b", "qn8c", "qn8d", "n4t1", "n4t2", "n4t3"})
        names.emplace_back(s);
    int refuted = 0;
    double worst = 0;
    for (const auto& name : names) {
        auto t0 = Clock::now();
        auto cs = named_example(name);
        auto r = find_pkahler(cs, 2);
        double secs = seconds_since(t0);
        worst = std::max(worst, secs);
        if (r.verdict != PKVerdict::REFUTED) o.fail(name + " gave " + to_string(r.verdict));
        else if (!verify_report(cs, r)) o.fail(name + " certificate does not verify");
        else ++refuted;
        if (secs > 60) o.fail(name + " took too long");
    }
    auto torus = named_example("torus4");
    auto rt = find_pkahler(torus, 2);
    if (rt.verdict != PKVerdict::FOUND || !verify_report(torus, rt)) o.fail("torus4 not FOUND");
    if (names.size() < 10) o.fail("too few instances");
    o.detail << refuted << "/" << names.size() << " refuted, torus4 " << to_string(rt.verdict)
             << ", slowest " << worst << " s";
    return o;
}

// ---- 4: almost abelian (n-2)-Kahler implies Kahler ----

Outcome almost_abelian_reduction() {
    Outcome o;
    int counts[3] = {0, 0, 0}, kahler = 0, total = 0;
    for (int n : {3, 4})
        for (int k = 0; k < 12; ++k) {
            AlmostAbelianData d = k % 3 == 0 ? kahler_type(n) : (k % 3 == 1 ? generic_type(n) : rank_violating(n));
            auto cs = build_almost_abelian(d);
            PKahlerOptions opt;
            opt.search.seed = static_cast<std::uint64_t>(k);
            auto r = find_pkahler(cs, n - 2, opt);
            auto dec = kahler_decision_almost_abelian(d);
            ++counts[static_cast<int>(r.verdict)];
            kahler += dec.kahler;
            ++total;
            if (r.verdict != PKVerdict::INCONCLUSIVE && !verify_report(cs, r))
                o.fail("report does not verify at n=" + std::to_string(n));
            if (r.verdict == PKVerdict::FOUND && !dec.kahler) o.fail("FOUND but decision false");
        }
    if (total < 20) o.fail("too few instances");
    o.detail << total << " instances: FOUND " << counts[0] << ", REFUTED " << counts[1] << ", INCONCLUSIVE "
             << counts[2] << "; Kahler decisions " << kahler;
    return o;
}

// ---- 5: Kahler criterion ----

Outcome kahler_criterion() {
    Outcome o;
    int found = 0, other = 0;
    for (int k = 0; k < 10; ++k) {
        int n = 3 + k % 2;
        AlmostAbelianData d;
        d.n = n;
        d.A = commuting(n, rand_skew(2 * n - 2, 3));
        d.v.assign(2 * n - 2, 0);
        auto cs = build_almost_abelian(d);
        auto r = find_pkahler(cs, 1);
        if (r.verdict == PKVerdict::FOUND && verify_report(cs, r)) ++found;
        else o.fail("skew instance gave " + to_string(r.verdict));
        if (!kahler_decision_almost_abelian(d).kahler) o.fail("decision false on a skew instance");
    }
    for (int k = 0; k < 10; ++k) {
        int n = 3 + k % 2;
        AlmostAbelianData d = rank_violating(n);
        auto cs = build_almost_abelian(d);
        auto r = find_pkahler(cs, 1);
        if (r.verdict == PKVerdict::FOUND) o.fail("rank-violating instance gave FOUND");
        else ++other;
        if (kahler_decision_almost_abelian(d).kahler) o.fail("decision true on a rank-violating instance");
    }
    o.detail << found << "/10 FOUND on skew data, " << other << "/10 not FOUND on rank-violating data";
    return o;
}

// ---- 6: d^2 = 0 iff Jacobi ----

LieAlgebra random_tensor(int dim) {
    LieAlgebra g(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                if (rand_int(0, 3) == 0) g.add_constant(i, j, k, rand_int(-1, 1));
    return g;
}

LieAlgebra random_lie(int which) {
    static const std::vector<std::string> names = {"kt", "iwasawa", "kt3", "n3t2", "iwasawa4", "qn8c"};
    if (which % 2 == 0) {
        AlmostAbelianData d = generic_type(2 + which % 3);
        return build_almost_abelian(d).algebra();
    }
    LieAlgebra g = named_example(names[which % names.size()]).algebra();
    const std::size_t dim = g.dim();
    for (;;) {
        RationalMatrix p = rand_matrix(dim, 1) + RationalMatrix::identity(dim);
        if (determinant(p) != 0) return g.change_basis(p);
    }
}

Outcome d_squared() {
    Outcome o;
    int jacobi_ok = 0;
    for (int k = 0; k < 100; ++k) {
        LieAlgebra g = k % 2 ? random_tensor(3 + k % 4) : random_lie(k / 2);
        bool jac = check_jacobi(g).ok;
        auto d = g.differential();
        bool dd = true;
        for (int e = 0; e < g.dim(); ++e)
            if (!d(d(ComplexForm::generator(g.dim(), e))).is_zero()) dd = false;
        if (dd != jac) o.fail("mismatch on tensor " + std::to_string(k));
        jacobi_ok += jac;
    }
    o.detail << "100 tensors, " << jacobi_ok << " satisfy Jacobi";
    return o;
}

// ---- 7: transversality sign under coframe changes ----

Outcome transversality_invariance() {
    Outcome o;
    int signs[3] = {0, 0, 0};
    for (int pair = 0; pair < 10; ++pair) {
        const int n = 3, p = 1 + pair % 2, q = n - p;
        auto basis = real_pp_basis(n, p);
        ComplexForm omega(2 * n);
        for (const auto& b : basis) omega += Scalar(rand_rational(-2, 2)) * b;
        if (pair % 3 == 0) omega += Scalar(Rational(3)) * divided_power(standard_kahler(n), p);
        ComplexMatrix cols(n, q);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < q; ++c) cols(r, c) = rand_gaussian(2);
        ComplexForm psi = wedge_columns(cols);
        Scalar v0 = volume_coefficient(omega, psi);
        if (!v0.is_real()) o.fail("non-real volume coefficient");
        int s0 = v0.re > 0 ? 1 : (v0.re < 0 ? -1 : 0);
        ++signs[s0 + 1];
        for (int t = 0; t < 50; ++t) {
            ComplexMatrix tm(n, n);
            std::optional<ComplexMatrix> ti;
            do {
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) tm(r, c) = rand_gaussian(2);
                ti = inverse(tm);
            } while (!ti);
            Scalar v1 = volume_coefficient(change_coframe(omega, *ti), change_coframe(psi, *ti));
            int s1 = v1.re > 0 ? 1 : (v1.re < 0 ? -1 : 0);
            if (!v1.is_real() || s1 != s0) o.fail("sign changed on pair " + std::to_string(pair));
        }
    }
    o.detail << "10 pairs x 50 changes; signs -/0/+ = " << signs[0] << "/" << signs[1] << "/" << signs[2];
    return o;
}

// ---- 8: Michelsohn root ----

std::vector<Rational> diagonal_of(const ComplexForm& omega, int n) {
    std::vector<Rational> out;
    for (int j = 1; j <= n; ++j) {
        Mask m = make_mask(n, Mask(1) << (j - 1), Mask(1) << (j - 1));
        out.push_back(omega.coefficient(m).im);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Outcome michelsohn() {
    Outcome o;
    int exact = 0, irrational = 0;
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
        const int m = 3 + k % 2;
        ComplexForm omega(2 * m);
        for (int j = 1; j <= m; ++j)
            omega += Scalar(Rational(0), rand_rational(1, 4, 4)) * wedge(alpha(m, j), alpha_bar(m, j));
        ComplexForm phi = divided_power(omega, m - 1);
        auto root = michelsohn_root(phi);
        if (!root.exact) {
            o.fail("rational root missed");
            continue;
        }
        bool diagonal = true;
        for (const auto& [mask, c] : root.omega.terms())
            if (holo_part(mask, m) != anti_part(mask, m)) diagonal = false;
        if (!diagonal || diagonal_of(root.omega, m) != diagonal_of(omega, m)) o.fail("round trip differs");
        if (!(divided_power(root.omega, m - 1) == phi)) o.fail("root does not reproduce phi");
        ++exact;
    }
    for (int k = 0; k < 10; ++k) {
        const int m = 3 + k % 2;
        ComplexForm phi(2 * m);
        for (Mask s : subsets(m, m - 1))
            phi.add_term(make_mask(m, s, s), i_power(static_cast<long>(m - 1) * (m - 1)) * Scalar(rand_rational(1, 3, 7)));
        // a small Hermitian off-diagonal perturbation keeps the Gram matrix positive
        auto subs = subsets(m, m - 1);
        Scalar c = Scalar(Rational(1, 20), Rational(1, 30)) * i_power(static_cast<long>(m - 1) * (m - 1));
        phi.add_term(make_mask(m, subs[0], subs[1]), c);
        phi.add_term(make_mask(m, subs[1], subs[0]), i_power(2L * (m - 1) * (m - 1)) * c.conj());
        if (!is_real(phi)) {
            o.fail("test form is not real");
            continue;
        }
        auto root = michelsohn_root(phi);
        if (root.exact) continue;
        ++irrational;
        worst = std::max(worst, root.residual);
        if (!(root.residual < 1e-9)) o.fail("float residual too large");
    }
    if (irrational == 0) o.fail("no irrational case exercised");
    o.detail << exact << " exact round trips, " << irrational << " float cases, worst residual " << worst;
    return o;
}

// ---- 9: reductions ----

Outcome reductions() {
    Outcome o;
    int restricted = 0, quotients = 0;
    struct Case {
        std::function<ComplexStructure()> make;
        std::string label;
        int p;
    };
    std::vector<Case> cases;
    for (const char* s : {"torus4", "iwasawa", "iwasawa4", "kt3", "kt4", "qn8a", "qn8c", "n4t2", "torus3"})
        for (int p = 1; p < 4; ++p) cases.push_back({[s] { return named_example(s); }, s, p});
    for (int k = 0; k < 4; ++k) {
        AlmostAbelianData d;
        d.n = 3 + k % 2;
        d.A = commuting(d.n, rand_skew(2 * d.n - 2, 2));
        d.v.assign(2 * d.n - 2, 0);
        cases.push_back({[d] { return build_almost_abelian(d); }, "almost-abelian", 1});
    }
    for (const auto& c : cases) {
        auto cs = c.make();
        const int n = cs.n();
        if (c.p >= n) continue;
        auto r = find_pkahler(cs, c.p);
        if (r.verdict != PKVerdict::FOUND) continue;
        const ComplexForm& omega = *r.form;
        std::vector<ComplexForm> images;
        for (int j = 0; j < n; ++j) images.push_back(cs.dalpha(j));
        auto closed = kernel(coefficient_matrix(images));
        if (c.p < n - 1 && n >= 3 && !closed.empty()) {
            ComplexForm a = one_form(n, closed[0]);
            auto red = restrict_to_jinvariant_ideal(cs, omega, a);
            bool ok = red.h.d(red.omega).is_zero() &&
                      check_transverse(red.omega, c.p).status == Transversality::TRANSVERSE;
            if (!ok) o.fail(c.label + " restriction at p=" + std::to_string(c.p));
            ++restricted;
        }
        auto inv = algebra_invariants(cs.algebra());
        if (inv.is_nilpotent && n >= 3 && c.p >= 2 && ascending_series(cs).classification != JClass::SNN) {
            auto q = b_extension_quotient(cs, omega);
            bool ok = q.k.d(q.omega).is_zero() &&
                      check_transverse(q.omega, c.p - 1).status == Transversality::TRANSVERSE;
            if (!ok) o.fail(c.label + " quotient at p=" + std::to_string(c.p));
            ++quotients;
        }
    }
    if (restricted == 0 || quotients == 0) o.fail("a reduction was never exercised");
    o.detail << restricted << " ideal restrictions, " << quotients << " b-extension quotients";
    return o;
}

// ---- 10: stnilp ----

Outcome stnilp() {
    Outcome o;
    std::vector<std::pair<std::string, int>> cases = {{"n4t1", 1}, {"n4t2", 2}, {"n4t3", 3}, {"n3t2", 2}, {"iwasawa", 2}};
    for (const auto& [name, t] : cases) {
        auto cs = named_example(name);
        auto st = stnilp_degree(cs);
        if (st.t != t) o.fail(name + " has t = " + std::to_string(st.t));
        auto r = find_pkahler(cs, cs.n() - t);
        if (r.verdict == PKVerdict::FOUND) o.fail(name + " FOUND at p = n - t");
        o.detail << name << ":" << to_string(r.verdict) << " ";
    }
    return o;
}

}  // namespace

int main() {
    struct Entry {
        int k;
        std::string title;
        std::function<Outcome()> run;
    };
    std::vector<Entry> entries = {
        {1, "obstruction family 1", [] { return family_obstruction(1); }},
        {2, "obstruction family 2", [] { return family_obstruction(2); }},
        {3, "8-dim consistency", eight_dim},
        {4, "almost abelian (n-2)-kahler implies kahler", almost_abelian_reduction},
        {5, "Kahler criterion", kahler_criterion},
        {6, "d^2 and Jacobi", d_squared},
        {7, "transversality invariance", transversality_invariance},
        {8, "Michelsohn root", michelsohn},
        {9, "reductions", reductions},
        {10, "stnilp consistency", stnilp},
    };
    const double limits[] = {1, 1, 0, 0, 0, 5, 0, 0, 0, 0};
    int failed = 0;
    for (const auto& e : entries) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o.fail(std::string("exception: ") + ex.what());
        }
        double secs = seconds_since(t0);
        if (limits[e.k - 1] > 0 && secs > limits[e.k - 1]) o.fail("over the time limit");
        report(e.k, e.title, o, secs);
        failed += !o.pass;
    }
    std::cout << (failed ? "SOME CRITERIA FAILED" : "ALL CRITERIA PASSED") << std::endl;
    return failed ? 1 : 0;
}
