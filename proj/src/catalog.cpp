#include "pkl/catalog.hpp"

#include "pkl/form_io.hpp"
#include "pkl/positivity.hpp"

#include <functional>
#include <map>

namespace pkl {

namespace {

ComplexStructure from_literals(int n, const std::vector<std::string>& lits, const ParamMap& params = {}) {
    std::vector<ComplexForm> d;
    for (const auto& s : lits) d.push_back(parse_form(n, s, params));
    return ComplexStructure::from_equations(n, std::move(d));
}

// ---- polynomials over Q, low degree first ----

using Poly = std::vector<Rational>;

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_rem(Poly a, const Poly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= f * b[k];
        trim(a);
    }
    return a;
}

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(Rational(static_cast<long>(k)) * p[k]);
    trim(d);
    return d;
}

Poly poly_gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

Rational eval(const Poly& p, const Rational& x) {
    Rational s = 0;
    for (std::size_t k = p.size(); k-- > 0;) s = s * x + p[k];
    return s;
}

int sign_changes(const std::vector<Poly>& chain, const Rational& x) {
    int changes = 0, last = 0;
    for (const auto& p : chain) {
        Rational v = eval(p, x);
        int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

RationalMatrix j1_matrix(int n) {
    const int m = 2 * n - 2;
    RationalMatrix j(m, m);
    for (int t = 0; t < n - 1; ++t) {
        j(m - 1 - t, t) = 1;
        j(t, m - 1 - t) = -1;
    }
    return j;
}

struct Slot {
    enum Kind { FIXED, ANY, NONNEG, UNIT } kind = FIXED;
    Rational value;
};

Slot fx(long v) { return {Slot::FIXED, Rational(v)}; }
const Slot kAny{Slot::ANY, 0};
const Slot kNonneg{Slot::NONNEG, 0};
const Slot kUnit{Slot::UNIT, 0};

const std::vector<std::vector<Slot>>& patterns(int family) {
    // eps, nu, a, b
    static const std::vector<std::vector<Slot>> f1 = {
        {fx(0), fx(0), fx(0), fx(1)}, {fx(0), fx(0), fx(1), fx(0)}, {fx(0), fx(0), fx(1), fx(1)},
        {fx(0), fx(1), fx(0), kUnit}, {fx(0), fx(1), fx(1), kAny},  {fx(1), fx(0), fx(0), fx(1)},
        {fx(1), fx(0), fx(1), kNonneg}, {fx(1), fx(1), kNonneg, kAny},
    };
    // eps, mu, nu, a, b
    static const std::vector<std::vector<Slot>> f2 = {
        {fx(1), fx(1), fx(0), kAny, kAny},   {fx(1), fx(0), fx(1), kAny, kAny},
        {fx(1), fx(0), fx(0), fx(0), kAny},  {fx(1), fx(0), fx(0), fx(1), kAny},
        {fx(0), fx(1), fx(0), fx(0), fx(0)}, {fx(0), fx(1), fx(0), fx(1), fx(0)},
    };
    if (family == 1) return f1;
    if (family == 2) return f2;
    throw CatalogError("family must be 1 or 2");
}

bool slot_matches(const Slot& s, const Rational& x) {
    switch (s.kind) {
    case Slot::FIXED: return x == s.value;
    case Slot::ANY: return true;
    case Slot::NONNEG: return x >= 0;
    case Slot::UNIT: return x == 1 || x == -1;
    }
    return false;
}

std::vector<Rational> grid_values(Slot::Kind kind, int limit) {
    static const std::vector<Rational> grid = {0, 1, -1, Rational(1, 2), Rational(-1, 2), 2, -2};
    std::vector<Rational> out;
    for (const auto& g : grid) {
        if (static_cast<int>(out.size()) >= limit) break;
        if (kind == Slot::NONNEG && g < 0) continue;
        if (kind == Slot::UNIT && g != 1 && g != -1) continue;
        out.push_back(g);
    }
    return out;
}

}  // namespace

// ---- SnN families ----

bool snn8_admissible(int family, const std::vector<Rational>& params, int delta) {
    const auto& pats = patterns(family);
    if (params.size() != pats[0].size()) return false;
    if (family == 1) {
        if (delta != 1 && delta != -1) return false;
        if (params[2] < 0 || (params[2] == 0 && params[3] == 0)) return false;
    }
    for (const auto& pat : pats) {
        bool ok = true;
        for (std::size_t k = 0; k < pat.size() && ok; ++k) ok = slot_matches(pat[k], params[k]);
        if (ok) return true;
    }
    return false;
}

ComplexStructure build_snn8(int family, const std::vector<Rational>& params, int delta) {
    if (!snn8_admissible(family, params, delta)) {
        std::string t;
        for (const auto& p : params) t += (t.empty() ? "" : ",") + to_string(p);
        throw CatalogError("inadmissible parameters (" + t + ") for family " + std::to_string(family));
    }
    ParamMap pm;
    if (family == 1) {
        pm = {{"eps", Scalar(params[0])}, {"nu", Scalar(params[1])}, {"pa", Scalar(params[2])},
              {"pb", Scalar(params[3])}, {"delta", Scalar(Rational(delta))}};
        return from_literals(4,
                             {"0", "eps a1_b1", "a14 + a1_b4 + pa a2_b1 + i delta eps pb a1_b2",
                              "i nu a1_b1 + pb a2_b2 + i delta a1_b3 - i delta a3_b1"},
                             pm);
    }
    pm = {{"eps", Scalar(params[0])}, {"mu", Scalar(params[1])}, {"nu", Scalar(params[2])},
          {"pa", Scalar(params[3])}, {"pb", Scalar(params[4])}};
    return from_literals(4,
                         {"0", "a14 + a1_b4",
                          "pa a1_b1 + eps a12 + eps a1_b2 - eps a2_b1 + i mu a24 + i mu a2_b4",
                          "i nu a1_b1 - mu a2_b2 + i pb a1_b2 - i pb a2_b1 + i a1_b3 - i a3_b1"},
                         pm);
}

std::vector<std::vector<Rational>> snn8_samples(int family, int per_free) {
    std::vector<std::vector<Rational>> out;
    for (const auto& pat : patterns(family)) {
        std::vector<std::vector<Rational>> partial = {{}};
        for (const auto& s : pat) {
            std::vector<Rational> vals =
                s.kind == Slot::FIXED ? std::vector<Rational>{s.value} : grid_values(s.kind, per_free);
            std::vector<std::vector<Rational>> next;
            for (const auto& p : partial)
                for (const auto& v : vals) {
                    auto q = p;
                    q.push_back(v);
                    next.push_back(std::move(q));
                }
            partial = std::move(next);
        }
        for (auto& p : partial)
            if (snn8_admissible(family, p, 1)) out.push_back(std::move(p));
    }
    return out;
}

ComplexForm snn8_obstruction_beta(int family, const std::vector<Rational>& params) {
    if (!snn8_admissible(family, params, 1)) throw CatalogError("inadmissible parameters");
    if (family == 1)
        return parse_form(4, "pb a14_b1 - pa a13_b2", {{"pa", Scalar(params[2])}, {"pb", Scalar(params[3])}});
    return parse_form(4, "a14_b1 + omu a12_b3", {{"omu", Scalar(1 - params[1])}});
}

// ---- almost abelian ----

bool AlmostAbelianData::is_unimodular() const {
    Rational tr = 0;
    for (std::size_t k = 0; k < A.rows(); ++k) tr += A(k, k);
    return lambda == -tr;
}

RationalMatrix almost_abelian_j1(int n) { return j1_matrix(n); }

void require_integrable(const AlmostAbelianData& d) {
    const std::size_t m = 2 * static_cast<std::size_t>(d.n) - 2;
    if (d.n < 2) throw InvalidStructure("almost abelian data needs n >= 2");
    if (d.A.rows() != m || d.A.cols() != m || d.v.size() != m)
        throw DimensionMismatch("A must be (2n-2)x(2n-2) and v of length 2n-2");
    RationalMatrix j1 = j1_matrix(d.n);
    if (!(d.A * j1 == j1 * d.A)) throw InvalidStructure("A does not commute with J_1; J is not integrable");
}

ComplexStructure build_almost_abelian(const AlmostAbelianData& d) {
    require_integrable(d);
    const int n = d.n, dim = 2 * n, m = dim - 2;
    LieAlgebra g(dim);
    RationalVector first(dim);
    first[0] = d.lambda;
    for (int k = 0; k < m; ++k) first[k + 1] = d.v[k];
    g.set_bracket(dim - 1, 0, first);
    for (int k = 0; k < m; ++k) {
        RationalVector col(dim);
        for (int j = 0; j < m; ++j) col[j + 1] = d.A(j, k);
        g.set_bracket(dim - 1, k + 1, col);
    }
    ComplexMatrix p(n, dim);
    for (int j = 0; j < n; ++j) {
        p(j, j) = Scalar(1);
        p(j, dim - 1 - j) = Scalar::i();
    }
    return ComplexStructure::from_coframe(g, p);
}

AlmostAbelianData read_almost_abelian(const ComplexStructure& cs) {
    const int n = cs.n(), dim = 2 * n, m = dim - 2;
    const auto& g = cs.algebra();
    AlmostAbelianData d;
    d.n = n;
    RationalVector first = g.bracket_basis(dim - 1, 0);
    d.lambda = first[0];
    d.v.assign(m, 0);
    d.A = RationalMatrix(m, m);
    for (int k = 0; k < m; ++k) d.v[k] = first[k + 1];
    for (int k = 0; k < m; ++k) {
        RationalVector col = g.bracket_basis(dim - 1, k + 1);
        for (int j = 0; j < m; ++j) d.A(j, k) = col[j + 1];
    }
    return d;
}

std::vector<Rational> minimal_polynomial(const RationalMatrix& a) {
    const std::size_t m = a.rows();
    std::vector<RationalVector> powers;
    RationalMatrix pw = RationalMatrix::identity(m);
    for (std::size_t k = 0; k <= m; ++k) {
        RationalVector flat;
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) flat.push_back(pw(r, c));
        powers.push_back(std::move(flat));
        auto ker = kernel(RationalMatrix::from_columns(powers, m * m));
        if (!ker.empty()) {
            Poly p = ker[0];
            trim(p);
            Rational lead = p.back();
            for (auto& c : p) c /= lead;
            return p;
        }
        pw = pw * a;
    }
    throw std::logic_error("no polynomial relation found");
}

int sturm_count(const std::vector<Rational>& poly, const Rational& lo, const Rational& hi) {
    Poly p = poly;
    trim(p);
    if (p.size() <= 1) return 0;
    std::vector<Poly> chain = {p, derivative(p)};
    while (!chain.back().empty()) {
        Poly r = poly_rem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        chain.push_back(std::move(r));
    }
    return sign_changes(chain, lo) - sign_changes(chain, hi);
}

bool semisimple_imaginary(const RationalMatrix& a) {
    Poly m = minimal_polynomial(a);
    Poly g = poly_gcd(m, derivative(m));
    if (g.size() > 1) return false;  // repeated root
    // all roots purely imaginary: m(x) = x^e q(x^2) with q having only negative real roots
    const std::size_t e = m[0] == 0 ? 1 : 0;
    Poly q;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (m[k] == 0) continue;
        if ((k % 2) != e) return false;
    }
    for (std::size_t k = e; k < m.size(); k += 2) q.push_back(m[k]);
    const int deg = static_cast<int>(q.size()) - 1;
    if (deg == 0) return true;
    Rational bound = 1;
    for (const auto& c : q) bound += abs(c / q.back());
    return sturm_count(q, -bound, Rational(0)) == deg;
}

AlmostAbelianKahler kahler_decision_almost_abelian(const AlmostAbelianData& d) {
    require_integrable(d);
    if (!d.is_unimodular()) throw InvalidStructure("almost abelian data is not unimodular");
    const int n = d.n;
    const std::size_t m = 2 * static_cast<std::size_t>(n) - 2;
    AlmostAbelianKahler out;
    if (d.lambda != 0) {
        out.reason = "lambda != 0, so A has non-zero trace";
        return out;
    }
    // rank(A) = rank(v | A) iff v lies in the image of A
    auto u_neg = solve(d.A, d.v);
    if (!u_neg) {
        out.reason = "rank(A) < rank(v | A)";
        return out;
    }
    if (!semisimple_imaginary(d.A)) {
        out.reason = "A is not semisimple with imaginary spectrum";
        return out;
    }
    out.u.resize(m);
    for (std::size_t k = 0; k < m; ++k) out.u[k] = -(*u_neg)[k];

    // J_1-invariant inner products for which A is skew
    RationalMatrix j1 = j1_matrix(n);
    std::vector<std::pair<std::size_t, std::size_t>> sym;
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r; c < m; ++c) sym.emplace_back(r, c);
    auto sym_basis = [&](std::size_t k) {
        RationalMatrix s(m, m);
        s(sym[k].first, sym[k].second) = 1;
        s(sym[k].second, sym[k].first) = 1;
        return s;
    };
    std::vector<RationalVector> cols;
    for (std::size_t k = 0; k < sym.size(); ++k) {
        RationalMatrix s = sym_basis(k);
        RationalMatrix c1 = d.A.transpose() * s + s * d.A;
        RationalMatrix c2 = j1.transpose() * s * j1 - s;
        RationalVector flat;
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) {
                flat.push_back(c1(r, c));
                flat.push_back(c2(r, c));
            }
        cols.push_back(std::move(flat));
    }
    auto ker = kernel(RationalMatrix::from_columns(cols, 2 * m * m));
    std::vector<RationalMatrix> gs;
    std::vector<ComplexMatrix> hs;
    for (const auto& y : ker) {
        RationalMatrix gm(m, m);
        for (std::size_t k = 0; k < sym.size(); ++k)
            if (y[k] != 0) gm = gm + y[k] * sym_basis(k);
        gs.push_back(gm);
        hs.push_back(to_complex(gm));
    }
    std::vector<std::vector<Rational>> seeds;
    for (std::size_t k = 0; k < gs.size(); ++k) {
        std::vector<Rational> e(gs.size());
        e[k] = 1;
        seeds.push_back(e);
    }
    seeds.emplace_back(gs.size(), Rational(1));
    SearchBudget budget;
    budget.restarts = 50;
    budget.threads = 1;
    auto y = gs.empty() ? std::nullopt : find_positive_combination(hs, seeds, budget);
    if (!y) throw std::runtime_error("no invariant inner product found although A is compact type");
    out.G = RationalMatrix(m, m);
    for (std::size_t k = 0; k < gs.size(); ++k)
        if ((*y)[k] != 0) out.G = out.G + (*y)[k] * gs[k];

    // Kahler form omega(X, Y) = g(JX, Y) for the metric with f_1 = e_1 + u,
    // f_{2n} = J f_1 orthonormal and orthogonal to a_1, and G on a_1
    const std::size_t dim = 2 * static_cast<std::size_t>(n);
    ComplexStructure cs = build_almost_abelian(d);
    RationalMatrix q = RationalMatrix::identity(dim);
    RationalVector ju = j1 * out.u;
    for (std::size_t k = 0; k < m; ++k) {
        q(k + 1, 0) = out.u[k];
        q(k + 1, dim - 1) = ju[k];
    }
    RationalMatrix gf(dim, dim);
    gf(0, 0) = 1;
    gf(dim - 1, dim - 1) = 1;
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) gf(r + 1, c + 1) = out.G(r, c);
    auto qi = inverse(q);
    RationalMatrix ge = qi->transpose() * gf * *qi;
    RationalMatrix om = cs.J().transpose() * ge;
    ComplexForm real(static_cast<int>(dim));
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = a + 1; b < dim; ++b)
            if (om(a, b) != 0) real.add_term((Mask(1) << a) | (Mask(1) << b), Scalar(om(a, b)));
    out.omega = cs.from_real(real);
    out.kahler = true;
    out.reason = "v lies in the image of A and A is skew for an invariant metric";
    return out;
}

// ---- named examples ----

namespace {

struct Named {
    std::string description;
    std::function<ComplexStructure()> make;
};

const std::map<std::string, Named>& registry() {
    static const std::map<std::string, Named> r = {
        {"iwasawa", {"Iwasawa: d a3 = a12", [] { return from_literals(3, {"0", "0", "a12"}); }}},
        {"iwasawa4", {"Iwasawa x C: d a3 = a12", [] { return from_literals(4, {"0", "0", "a12", "0"}); }}},
        {"kt", {"Kodaira-Thurston: d a2 = a1_b1", [] { return from_literals(2, {"0", "a1_b1"}); }}},
        {"kt3", {"Kodaira-Thurston x C", [] { return from_literals(3, {"0", "a1_b1", "0"}); }}},
        {"kt4", {"Kodaira-Thurston x C^2", [] { return from_literals(4, {"0", "a1_b1", "0", "0"}); }}},
        {"qn8a", {"b-extension of R^6: d a4 = a12", [] { return from_literals(4, {"0", "0", "0", "a12"}); }}},
        {"qn8b", {"b-extension of R^6: d a4 = a1_b1", [] { return from_literals(4, {"0", "0", "0", "a1_b1"}); }}},
        {"qn8c", {"b-extension of R^6: d a4 = a1_b1 + a2_b2 + a3_b3",
                  [] { return from_literals(4, {"0", "0", "0", "a1_b1 + a2_b2 + a3_b3"}); }}},
        {"qn8d", {"b-extension of R^6: d a4 = a12 + a3_b3",
                  [] { return from_literals(4, {"0", "0", "0", "a12 + a3_b3"}); }}},
        {"n4t1", {"nilpotent J with t = 1: d a2 = a1_b1, d a3 = a12, d a4 = a13",
                  [] { return from_literals(4, {"0", "a1_b1", "a12", "a13"}); }}},
        {"n4t2", {"nilpotent J with t = 2: d a3 = a12, d a4 = a13",
                  [] { return from_literals(4, {"0", "0", "a12", "a13"}); }}},
        {"n4t3", {"nilpotent J with t = 3: d a4 = a12 + a3_b3",
                  [] { return from_literals(4, {"0", "0", "0", "a12 + a3_b3"}); }}},
        {"n3t2", {"nilpotent J with t = 2: d a3 = a1_b1", [] { return from_literals(3, {"0", "0", "a1_b1"}); }}},
    };
    return r;
}

std::vector<Rational> parse_tuple(const std::string& text) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(parse_rational(text.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::vector<CatalogEntry> catalog_list() {
    std::vector<CatalogEntry> out;
    out.push_back({"torus<n>", "abelian R^{2n} with the standard J"});
    for (const auto& [name, entry] : registry()) out.push_back({name, entry.description});
    out.push_back({"snn8f1:eps,nu,a,b[,delta]", "strongly non-nilpotent family 1 in dimension 8"});
    out.push_back({"snn8f2:eps,mu,nu,a,b", "strongly non-nilpotent family 2 in dimension 8"});
    return out;
}

std::optional<std::pair<int, std::vector<Rational>>> snn8_from_name(const std::string& name) {
    for (int family : {1, 2}) {
        std::string prefix = "snn8f" + std::to_string(family) + ":";
        if (name.rfind(prefix, 0) != 0) continue;
        std::vector<Rational> t;
        try {
            t = parse_tuple(name.substr(prefix.size()));
        } catch (const ParseError& e) {
            throw CatalogError("bad parameter tuple in '" + name + "': " + e.what());
        }
        return std::make_pair(family, t);
    }
    return std::nullopt;
}

ComplexStructure named_example(const std::string& name) {
    if (name.rfind("torus", 0) == 0 && name.size() > 5) {
        int n = 0;
        try {
            n = std::stoi(name.substr(5));
        } catch (const std::exception&) {
            throw CatalogError("unknown catalog entry '" + name + "'");
        }
        if (n < 1 || n > 8) throw CatalogError("torus dimension must lie in 1..8");
        return from_literals(n, std::vector<std::string>(n, "0"));
    }
    if (auto parsed = snn8_from_name(name)) {
        auto [family, t] = *parsed;
        int delta = 1;
        if (family == 1 && t.size() == 5) {
            if (t[4] != 1 && t[4] != -1) throw CatalogError("delta must be 1 or -1");
            delta = t[4] == 1 ? 1 : -1;
            t.pop_back();
        }
        return build_snn8(family, t, delta);
    }
    auto it = registry().find(name);
    if (it == registry().end()) throw CatalogError("unknown catalog entry '" + name + "'");
    return it->second.make();
}

namespace {
Rational real_entry(const nlohmann::json& j) {
    Scalar s = scalar_from_json(j);
    if (!s.is_real()) throw std::invalid_argument("almost abelian data must be real");
    return s.re;
}
}  // namespace

AlmostAbelianData almost_abelian_from_json(const nlohmann::json& j) {
    AlmostAbelianData d;
    d.n = j.at("n").get<int>();
    const std::size_t m = 2 * static_cast<std::size_t>(d.n) - 2;
    d.lambda = j.contains("lambda") ? real_entry(j.at("lambda")) : Rational(0);
    d.v.assign(m, 0);
    if (j.contains("v")) {
        if (j.at("v").size() != m) throw DimensionMismatch("v must have length 2n-2");
        for (std::size_t k = 0; k < m; ++k) d.v[k] = real_entry(j.at("v")[k]);
    }
    d.A = RationalMatrix(m, m);
    if (j.contains("A")) {
        const auto& a = j.at("A");
        if (a.size() != m) throw DimensionMismatch("A must be (2n-2)x(2n-2)");
        for (std::size_t r = 0; r < m; ++r) {
            if (a[r].size() != m) throw DimensionMismatch("A must be (2n-2)x(2n-2)");
            for (std::size_t c = 0; c < m; ++c) d.A(r, c) = real_entry(a[r][c]);
        }
    }
    return d;
}

nlohmann::json almost_abelian_to_json(const AlmostAbelianData& d) {
    nlohmann::json j;
    j["n"] = d.n;
    j["lambda"] = to_string(d.lambda);
    j["v"] = nlohmann::json::array();
    for (const auto& x : d.v) j["v"].push_back(to_string(x));
    j["A"] = nlohmann::json::array();
    for (std::size_t r = 0; r < d.A.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < d.A.cols(); ++c) row.push_back(to_string(d.A(r, c)));
        j["A"].push_back(row);
    }
    return j;
}

}  // namespace pkl
