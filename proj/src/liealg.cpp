#include "pkl/liealg.hpp"

#include <string>

namespace pkl {

LieAlgebra::LieAlgebra(int dim) : dim_(dim), c_(static_cast<std::size_t>(dim) * dim * dim) {
    if (dim < 0 || dim > kMaxGenerators) throw InvalidAlgebra("algebra dimension out of range");
}

void LieAlgebra::set_bracket(int i, int j, const RationalVector& value) {
    if (i == j) throw InvalidAlgebra("bracket of a basis vector with itself is zero");
    if (static_cast<int>(value.size()) != dim_) throw DimensionMismatch("bracket value has wrong length");
    for (int k = 0; k < dim_; ++k) {
        c_[index(i, j, k)] = value[k];
        c_[index(j, i, k)] = -value[k];
    }
}

void LieAlgebra::add_constant(int i, int j, int k, const Rational& coeff) {
    if (i == j) {
        if (coeff != 0) throw InvalidAlgebra("structure constants must be antisymmetric");
        return;
    }
    c_[index(i, j, k)] += coeff;
    c_[index(j, i, k)] -= coeff;
}

RationalVector LieAlgebra::bracket(const RationalVector& x, const RationalVector& y) const {
    RationalVector out(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < dim_; ++j) {
            if (y[j] == 0 || i == j) continue;
            Rational xy = x[i] * y[j];
            for (int k = 0; k < dim_; ++k) {
                const Rational& ck = c_[index(i, j, k)];
                if (ck != 0) out[k] += xy * ck;
            }
        }
    }
    return out;
}

RationalVector LieAlgebra::bracket_basis(int i, int j) const {
    RationalVector out(dim_);
    for (int k = 0; k < dim_; ++k) out[k] = c_[index(i, j, k)];
    return out;
}

RationalMatrix LieAlgebra::ad(const RationalVector& x) const {
    RationalMatrix m(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
        RationalVector ej(dim_);
        ej[j] = 1;
        auto col = bracket(x, ej);
        for (int k = 0; k < dim_; ++k) m(k, j) = col[k];
    }
    return m;
}

ComplexForm LieAlgebra::d_generator(int k) const {
    ComplexForm out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j) {
            const Rational& ck = c_[index(i, j, k)];
            if (ck != 0) out.add_term((Mask(1) << i) | (Mask(1) << j), Scalar(-ck));
        }
    return out;
}

Differential LieAlgebra::differential() const {
    std::vector<ComplexForm> images;
    for (int k = 0; k < dim_; ++k) images.push_back(d_generator(k));
    return Differential(std::move(images));
}

bool LieAlgebra::is_abelian() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

LieAlgebra LieAlgebra::change_basis(const RationalMatrix& p) const {
    auto inv = inverse(p);
    if (!inv) throw InvalidAlgebra("change of basis is singular");
    LieAlgebra out(dim_);
    for (int a = 0; a < dim_; ++a)
        for (int b = a + 1; b < dim_; ++b) {
            auto br = bracket(p.column(a), p.column(b));
            out.set_bracket(a, b, (*inv) * br);
        }
    return out;
}

LieAlgebra LieAlgebra::from_differential(const std::vector<ComplexForm>& de) {
    const int m = static_cast<int>(de.size());
    LieAlgebra g(m);
    for (int k = 0; k < m; ++k) {
        if (de[k].rank() != m) throw DimensionMismatch("differential image on a foreign coframe");
        for (const auto& [mask, coeff] : de[k].terms()) {
            if (popcount(mask) != 2) throw InvalidAlgebra("d e^" + std::to_string(k + 1) + " is not a 2-form");
            if (!coeff.is_real()) throw InvalidAlgebra("d e^" + std::to_string(k + 1) + " is not real");
            int i = std::countr_zero(mask);
            int j = std::countr_zero(mask & (mask - 1));
            g.add_constant(i, j, k, -coeff.re);
        }
    }
    return g;
}

JacobiCheck check_jacobi(const LieAlgebra& g) {
    const int n = g.dim();
    JacobiCheck out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                RationalVector ei(n), ej(n), ek(n);
                ei[i] = 1, ej[j] = 1, ek[k] = 1;
                auto r = g.bracket(g.bracket_basis(i, j), ek);
                auto s = g.bracket(g.bracket_basis(j, k), ei);
                auto t = g.bracket(g.bracket_basis(k, i), ej);
                bool zero = true;
                for (int l = 0; l < n; ++l) {
                    r[l] += s[l] + t[l];
                    if (r[l] != 0) zero = false;
                }
                if (!zero) {
                    out.ok = false;
                    out.i = i, out.j = j, out.k = k;
                    out.residual = std::move(r);
                    return out;
                }
            }
    return out;
}

void require_jacobi(const LieAlgebra& g) {
    auto jc = check_jacobi(g);
    if (!jc.ok)
        throw InvalidAlgebra("Jacobi identity fails at (e" + std::to_string(jc.i + 1) + ", e" +
                             std::to_string(jc.j + 1) + ", e" + std::to_string(jc.k + 1) + ")");
}

std::vector<RationalVector> span_basis(const std::vector<RationalVector>& vectors, std::size_t dim) {
    if (vectors.empty()) return {};
    RationalMatrix m(vectors.size(), dim);
    for (std::size_t r = 0; r < vectors.size(); ++r)
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = vectors[r][c];
    return row_space(m);
}

std::vector<RationalVector> annihilator(const std::vector<RationalVector>& vectors, std::size_t dim) {
    if (vectors.empty()) {
        std::vector<RationalVector> all;
        for (std::size_t k = 0; k < dim; ++k) {
            RationalVector e(dim);
            e[k] = 1;
            all.push_back(e);
        }
        return all;
    }
    RationalMatrix m(vectors.size(), dim);
    for (std::size_t r = 0; r < vectors.size(); ++r)
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = vectors[r][c];
    return kernel(m);
}

AlgebraInvariants algebra_invariants(const LieAlgebra& g) {
    const int n = g.dim();
    AlgebraInvariants inv;

    // center: [x, e_j] = 0 for all j
    RationalMatrix cm(static_cast<std::size_t>(n) * n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) cm(static_cast<std::size_t>(j) * n + k, i) = g.c(i, j, k);
    inv.center_basis = kernel(cm);

    std::vector<RationalVector> current;
    for (int k = 0; k < n; ++k) {
        RationalVector e(n);
        e[k] = 1;
        current.push_back(e);
    }
    inv.lower_central_series_dims.push_back(n);
    for (;;) {
        std::vector<RationalVector> next;
        for (int i = 0; i < n; ++i) {
            RationalVector ei(n);
            ei[i] = 1;
            for (const auto& y : current) next.push_back(g.bracket(ei, y));
        }
        next = span_basis(next, n);
        int d = static_cast<int>(next.size());
        if (d == inv.lower_central_series_dims.back()) break;
        inv.lower_central_series_dims.push_back(d);
        current = std::move(next);
        if (d == 0) break;
    }
    inv.is_nilpotent = inv.lower_central_series_dims.back() == 0;

    inv.is_unimodular = true;
    for (int i = 0; i < n && inv.is_unimodular; ++i) {
        Rational tr(0);
        for (int k = 0; k < n; ++k) tr += g.c(i, k, k);
        if (tr != 0) inv.is_unimodular = false;
    }

    // A hyperplane ker(phi) is an ideal iff d phi = 0, and abelian iff every
    // d e^k vanishes on it, i.e. d e^k ^ phi = 0. Both conditions are linear.
    if (n > 0) {
        auto d = g.differential();
        std::vector<std::vector<Rational>> rows;
        auto add_rows = [&](const std::vector<ComplexForm>& images) {
            std::map<Mask, std::vector<Rational>> collected;
            for (int a = 0; a < n; ++a)
                for (const auto& [mask, coeff] : images[a].terms()) {
                    auto& row = collected[mask];
                    if (row.empty()) row.assign(n, Rational(0));
                    row[a] += coeff.re;
                }
            for (auto& [mask, row] : collected) rows.push_back(std::move(row));
        };
        std::vector<ComplexForm> dphi;
        for (int a = 0; a < n; ++a) dphi.push_back(g.d_generator(a));
        add_rows(dphi);
        for (int k = 0; k < n; ++k) {
            std::vector<ComplexForm> wedges;
            ComplexForm dek = g.d_generator(k);
            for (int a = 0; a < n; ++a) wedges.push_back(wedge(dek, ComplexForm::generator(n, a)));
            add_rows(wedges);
        }
        std::vector<RationalVector> sols;
        if (rows.empty()) {
            RationalVector e(n);
            e[n - 1] = 1;
            sols.push_back(e);
        } else {
            RationalMatrix m(rows.size(), n);
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (int c = 0; c < n; ++c) m(r, c) = rows[r][c];
            sols = kernel(m);
        }
        if (!sols.empty()) inv.abelian_codim1_ideal = annihilator({sols.front()}, n);
    }
    return inv;
}

LieAlgebra algebra_from_json(const nlohmann::json& j) {
    if (j.contains("brackets")) {
        int dim = j.at("dim").get<int>();
        LieAlgebra g(dim);
        for (const auto& b : j.at("brackets")) {
            int i = b.at("i").get<int>() - 1, jj = b.at("j").get<int>() - 1, k = b.at("k").get<int>() - 1;
            if (i < 0 || jj < 0 || k < 0 || i >= dim || jj >= dim || k >= dim)
                throw InvalidAlgebra("bracket index out of range");
            const auto& c = b.at("c");
            Rational q = c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long long>());
            if (i == jj) throw InvalidAlgebra("bracket [e_i, e_i] must vanish");
            g.add_constant(i, jj, k, q);
        }
        return g;
    }
    if (j.contains("d")) {
        const auto& d = j.at("d");
        int dim = j.value("dim", 0);
        for (auto it = d.begin(); it != d.end(); ++it) {
            const std::string& key = it.key();
            if (key.size() < 2 || key[0] != 'e') throw InvalidAlgebra("coframe keys look like e3");
            dim = std::max(dim, std::stoi(key.substr(1)));
        }
        ParamMap params;
        if (j.contains("params"))
            for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
                params[it.key()] = scalar_from_json(it.value());
        std::vector<ComplexForm> de(dim, ComplexForm(dim));
        for (auto it = d.begin(); it != d.end(); ++it) {
            int k = std::stoi(it.key().substr(1)) - 1;
            de[k] = parse_real_form(dim, it.value().get<std::string>(), params);
        }
        return LieAlgebra::from_differential(de);
    }
    throw InvalidAlgebra("algebra JSON needs either \"brackets\" or \"d\"");
}

nlohmann::json algebra_to_json(const LieAlgebra& g) {
    nlohmann::json br = nlohmann::json::array();
    for (int i = 0; i < g.dim(); ++i)
        for (int j = i + 1; j < g.dim(); ++j)
            for (int k = 0; k < g.dim(); ++k)
                if (g.c(i, j, k) != 0)
                    br.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"c", g.c(i, j, k).str()}});
    return {{"dim", g.dim()}, {"brackets", br}};
}

}  // namespace pkl
