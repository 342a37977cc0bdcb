#include "pkl/cxstruct.hpp"

#include <algorithm>
#include <string>

namespace pkl {

namespace {

ComplexMatrix stacked_coframe(const ComplexMatrix& p) {
    const std::size_t n = p.rows();
    ComplexMatrix m(2 * n, p.cols());
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < p.cols(); ++a) {
            m(j, a) = p(j, a);
            m(n + j, a) = p(j, a).conj();
        }
    return m;
}

// Coefficient-wise conjugation of a form over a real coframe.
ComplexForm conj_coefficients(const ComplexForm& f) {
    ComplexForm out(f.rank());
    for (const auto& [m, c] : f.terms()) out.add_term(m, c.conj());
    return out;
}

// d on the complex coframe theta = (alpha, conj alpha) induced by g.
Differential complex_differential(const LieAlgebra& g, const ComplexMatrix& m, const ComplexMatrix& inv) {
    const int dim = g.dim();
    std::vector<ComplexForm> e_images;
    for (int a = 0; a < dim; ++a) {
        ComplexForm f(dim);
        for (int k = 0; k < dim; ++k) f.add_term(Mask(1) << k, inv(a, k));
        e_images.push_back(std::move(f));
    }
    std::vector<ComplexForm> de;
    for (int a = 0; a < dim; ++a) de.push_back(substitute(g.d_generator(a), e_images, dim));
    std::vector<ComplexForm> images;
    for (int k = 0; k < dim; ++k) {
        ComplexForm f(dim);
        for (int a = 0; a < dim; ++a)
            if (!m(k, a).is_zero()) f += m(k, a) * de[a];
        images.push_back(std::move(f));
    }
    return Differential(std::move(images));
}

bool has_02_part(const Differential& d, int n, int* which = nullptr) {
    for (int j = 0; j < n; ++j)
        if (!bidegree_component(d.of_generator(j), 0, 2).is_zero()) {
            if (which) *which = j;
            return true;
        }
    return false;
}

std::vector<Scalar> unit(std::size_t n, std::size_t k) {
    std::vector<Scalar> v(n);
    v[k] = Scalar(1);
    return v;
}

// Appends the vectors of `candidates` that enlarge the span of `rows`.
int extend_basis(std::vector<std::vector<Scalar>>& rows, const std::vector<std::vector<Scalar>>& candidates) {
    int added = 0;
    for (const auto& v : candidates) {
        auto trial = rows;
        trial.push_back(v);
        if (rank(ComplexMatrix::from_rows(trial)) == trial.size()) {
            rows = std::move(trial);
            ++added;
        }
    }
    return added;
}

// Canonical (RREF) basis of the common kernel of vertically stacked blocks.
std::vector<std::vector<Scalar>> common_kernel(const std::vector<ComplexMatrix>& blocks, std::size_t cols) {
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.rows();
    ComplexMatrix m(total, cols);
    std::size_t r = 0;
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < b.rows(); ++i, ++r)
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = b(i, c);
    auto k = kernel(m);
    if (k.empty()) return {};
    return row_space(ComplexMatrix::from_rows(k));
}

ComplexMatrix completed_coframe(const std::vector<Scalar>& first, std::size_t n, bool first_goes_last) {
    std::vector<std::vector<Scalar>> rows{first};
    std::vector<std::vector<Scalar>> units;
    for (std::size_t k = 0; k < n; ++k) units.push_back(unit(n, k));
    extend_basis(rows, units);
    if (first_goes_last) std::rotate(rows.begin(), rows.begin() + 1, rows.end());
    return ComplexMatrix::from_rows(rows);
}

std::vector<int> all_but(int n, int skip) {
    // generators of the coframe of dimension n without alpha^{skip+1} and its conjugate
    std::vector<int> keep;
    for (int g = 0; g < 2 * n; ++g)
        if (g != skip && g != n + skip) keep.push_back(g);
    return keep;
}

}  // namespace

ComplexStructure ComplexStructure::from_equations(int n, std::vector<ComplexForm> dalpha) {
    if (n < 1 || 2 * n > kMaxGenerators) throw InvalidStructure("coframe dimension out of range");
    if (static_cast<int>(dalpha.size()) != n) throw InvalidStructure("need one equation per coframe element");
    for (int j = 0; j < n; ++j) {
        if (dalpha[j].rank() != 2 * n) throw DimensionMismatch("equation on a foreign coframe");
        for (const auto& [m, c] : dalpha[j].terms())
            if (popcount(m) != 2) throw InvalidStructure("d alpha^" + std::to_string(j + 1) + " must be a 2-form");
        if (!bidegree_component(dalpha[j], 0, 2).is_zero())
            throw InvalidStructure("d alpha^" + std::to_string(j + 1) +
                                   " has a (0,2) component; J is not integrable");
    }
    ComplexStructure cs;
    cs.n_ = n;
    cs.p_ = ComplexMatrix(n, 2 * n);
    cs.j_ = RationalMatrix(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        cs.p_(j, 2 * j) = Scalar(1);
        cs.p_(j, 2 * j + 1) = Scalar::i();
        cs.j_(2 * j + 1, 2 * j) = 1;
        cs.j_(2 * j, 2 * j + 1) = -1;
    }
    std::vector<ComplexForm> images;
    for (int k = 0; k < n; ++k) {
        ComplexForm f(2 * n);
        f.add_term(Mask(1) << (2 * k), Scalar(1));
        f.add_term(Mask(1) << (2 * k + 1), Scalar::i());
        images.push_back(std::move(f));
    }
    for (int k = 0; k < n; ++k) images.push_back(conj_coefficients(images[k]));
    std::vector<ComplexForm> de(2 * n, ComplexForm(2 * n));
    for (int j = 0; j < n; ++j) {
        ComplexForm f = substitute(dalpha[j], images, 2 * n);
        ComplexForm re(2 * n), im(2 * n);
        for (const auto& [m, c] : f.terms()) {
            re.add_term(m, Scalar(c.re));
            im.add_term(m, Scalar(c.im));
        }
        de[2 * j] = std::move(re);
        de[2 * j + 1] = std::move(im);
    }
    cs.g_ = LieAlgebra::from_differential(de);
    auto jc = check_jacobi(cs.g_);
    if (!jc.ok) throw InvalidStructure("structure equations violate d^2 = 0 (Jacobi fails on the real model)");
    cs.build_differential();
    for (int j = 0; j < n; ++j)
        if (!(cs.dalpha(j) == dalpha[j])) throw std::logic_error("real model does not reproduce the equations");
    return cs;
}

ComplexStructure ComplexStructure::from_J(const LieAlgebra& g, const RationalMatrix& j) {
    const int dim = g.dim();
    if (dim % 2 || static_cast<int>(j.rows()) != dim || static_cast<int>(j.cols()) != dim)
        throw InvalidStructure("J must be a square matrix of the (even) algebra dimension");
    if (!(j * j == Rational(-1) * RationalMatrix::identity(dim))) throw InvalidStructure("J^2 != -Id");
    require_jacobi(g);
    auto ic = check_integrability(g, j);
    if (!ic.integrable)
        throw InvalidStructure("J is not integrable: N_J(e" + std::to_string(ic.x + 1) + ", e" +
                               std::to_string(ic.y + 1) + ") != 0");
    return from_coframe(g, holomorphic_coframe(j));
}

ComplexStructure ComplexStructure::from_coframe(const LieAlgebra& g, const ComplexMatrix& p) {
    const int dim = g.dim();
    if (dim % 2 || static_cast<int>(p.rows()) * 2 != dim || static_cast<int>(p.cols()) != dim)
        throw InvalidStructure("coframe must be n x 2n");
    ComplexMatrix m = stacked_coframe(p);
    auto inv = inverse(m);
    if (!inv) throw InvalidStructure("coframe and its conjugate are not independent");
    const int n = dim / 2;
    ComplexMatrix diag(dim, dim);
    for (int k = 0; k < n; ++k) {
        diag(k, k) = Scalar::i();
        diag(n + k, n + k) = -Scalar::i();
    }
    ComplexMatrix jc = (*inv) * diag * m;
    RationalMatrix j(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            if (!jc(a, b).is_real()) throw std::logic_error("coframe induces a non-real J");
            j(a, b) = jc(a, b).re;
        }
    require_jacobi(g);
    ComplexStructure cs;
    cs.n_ = n;
    cs.g_ = g;
    cs.j_ = std::move(j);
    cs.p_ = p;
    cs.build_differential();
    int bad = -1;
    if (has_02_part(cs.d_, n, &bad))
        throw InvalidStructure("d alpha^" + std::to_string(bad + 1) + " has a (0,2) component; J is not integrable");
    return cs;
}

void ComplexStructure::build_differential() {
    ComplexMatrix m = stacked_coframe(p_);
    auto inv = inverse(m);
    if (!inv) throw InvalidStructure("singular coframe");
    inv_ = *inv;
    d_ = complex_differential(g_, m, inv_);
}

ComplexStructure ComplexStructure::with_coframe(const ComplexMatrix& t) const {
    if (static_cast<int>(t.rows()) != n_ || static_cast<int>(t.cols()) != n_)
        throw DimensionMismatch("coframe change has the wrong size");
    if (!inverse(t)) throw InvalidStructure("coframe change is singular");
    ComplexStructure cs = *this;
    cs.p_ = t * p_;
    cs.build_differential();
    return cs;
}

ComplexForm ComplexStructure::from_real(const ComplexForm& real_form) const {
    const int dim = 2 * n_;
    std::vector<ComplexForm> images;
    for (int a = 0; a < dim; ++a) {
        ComplexForm f(dim);
        for (int k = 0; k < dim; ++k) f.add_term(Mask(1) << k, inv_(a, k));
        images.push_back(std::move(f));
    }
    return substitute(real_form, images, dim);
}

ComplexForm ComplexStructure::to_real(const ComplexForm& f) const {
    const int dim = 2 * n_;
    ComplexMatrix m = stacked_coframe(p_);
    std::vector<ComplexForm> images;
    for (int k = 0; k < dim; ++k) {
        ComplexForm img(dim);
        for (int a = 0; a < dim; ++a) img.add_term(Mask(1) << a, m(k, a));
        images.push_back(std::move(img));
    }
    return substitute(f, images, dim);
}

std::vector<Scalar> ComplexStructure::evaluate_coframe(const RationalVector& x) const {
    std::vector<Scalar> out(n_);
    for (int j = 0; j < n_; ++j)
        for (int a = 0; a < 2 * n_; ++a)
            if (x[a] != 0) out[j] += p_(j, a) * Scalar(x[a]);
    return out;
}

RationalVector nijenhuis(const LieAlgebra& g, const RationalMatrix& j, const RationalVector& x,
                         const RationalVector& y) {
    auto jx = j * x, jy = j * y;
    auto a = g.bracket(jx, jy);
    auto b = j * g.bracket(jx, y);
    auto c = j * g.bracket(x, jy);
    auto d = g.bracket(x, y);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k] + c[k] + d[k];
    return a;
}

ComplexMatrix holomorphic_coframe(const RationalMatrix& j) {
    const std::size_t dim = j.rows();
    ComplexMatrix a = to_complex(j.transpose());
    for (std::size_t k = 0; k < dim; ++k) a(k, k) -= Scalar::i();
    auto rows = row_space(ComplexMatrix::from_rows(kernel(a)));
    if (rows.size() * 2 != dim) throw InvalidStructure("J has no half-dimensional +i eigenspace");
    return ComplexMatrix::from_rows(rows);
}

IntegrabilityCheck check_integrability(const LieAlgebra& g, const RationalMatrix& j) {
    const int dim = g.dim();
    IntegrabilityCheck out;
    for (int a = 0; a < dim && out.integrable; ++a)
        for (int b = a + 1; b < dim; ++b) {
            RationalVector x(dim), y(dim);
            x[a] = 1, y[b] = 1;
            auto nv = nijenhuis(g, j, x, y);
            bool zero = std::all_of(nv.begin(), nv.end(), [](const Rational& q) { return q == 0; });
            if (!zero) {
                out.integrable = false;
                out.x = a, out.y = b;
                out.nijenhuis = std::move(nv);
                break;
            }
        }
    ComplexMatrix p = holomorphic_coframe(j);
    ComplexMatrix m = stacked_coframe(p);
    auto inv = inverse(m);
    if (!inv) throw std::logic_error("eigen-coframe is singular");
    bool bidegree_ok = !has_02_part(complex_differential(g, m, *inv), dim / 2);
    if (bidegree_ok != out.integrable)
        throw std::logic_error("Nijenhuis and bidegree integrability tests disagree");
    return out;
}

std::string to_string(JClass c) {
    switch (c) {
    case JClass::SNN: return "strongly non-nilpotent";
    case JClass::WEAKLY_NON_NILPOTENT: return "quasi-nilpotent (not nilpotent)";
    case JClass::NILPOTENT: return "quasi-nilpotent (nilpotent J)";
    }
    return "?";
}

AscendingSeries ascending_series(const ComplexStructure& cs) {
    const LieAlgebra& g = cs.algebra();
    const RationalMatrix& j = cs.J();
    const int dim = g.dim();
    if (!algebra_invariants(g).is_nilpotent)
        throw InvalidStructure("the ascending series classification needs a nilpotent algebra");
    AscendingSeries s;
    s.terms.push_back({});
    for (int step = 0; step < dim + 1; ++step) {
        auto ann = annihilator(s.terms.back(), dim);
        std::vector<RationalVector> rows;
        for (const auto& phi : ann)
            for (int b = 0; b < dim; ++b) {
                RationalVector r(dim), rj(dim);
                for (int a = 0; a < dim; ++a)
                    for (int k = 0; k < dim; ++k)
                        if (phi[k] != 0) r[a] += phi[k] * g.c(a, b, k);
                for (int c = 0; c < dim; ++c)
                    for (int a = 0; a < dim; ++a)
                        if (j(a, c) != 0) rj[c] += j(a, c) * r[a];
                rows.push_back(std::move(r));
                rows.push_back(std::move(rj));
            }
        std::vector<RationalVector> next;
        if (rows.empty()) {
            next = annihilator({}, dim);
        } else {
            next = kernel(RationalMatrix::from_rows(rows));
            next = span_basis(next, dim);
        }
        if (next.size() == s.terms.back().size()) break;
        s.terms.push_back(std::move(next));
    }
    s.stabilization = static_cast<int>(s.terms.size()) - 1;
    if (s.terms.size() < 2) s.classification = JClass::SNN;
    else if (static_cast<int>(s.terms.back().size()) == dim) s.classification = JClass::NILPOTENT;
    else s.classification = JClass::WEAKLY_NON_NILPOTENT;
    return s;
}

AdaptedBasis salamon_basis(const ComplexStructure& cs) {
    const int n = cs.n();
    AdaptedBasis out;
    std::vector<std::vector<Scalar>> rows;
    while (static_cast<int>(rows.size()) < n) {
        ComplexForm theta = ComplexForm::monomial(2 * n, 0);
        for (const auto& r : rows) theta = wedge(theta, one_form(n, r));
        std::vector<ComplexForm> conds;
        for (int i = 0; i < n; ++i) conds.push_back(wedge(cs.dalpha(i), theta));
        auto w = common_kernel({coefficient_matrix(conds)}, n);
        int added = extend_basis(rows, w);
        if (added == 0) throw InvalidStructure("no triangular coframe: the algebra is not nilpotent");
        if (out.blocks.empty()) out.closed = added;
        out.blocks.push_back(added);
    }
    out.t = ComplexMatrix::from_rows(rows);
    return out;
}

AdaptedBasis nilpotent_basis(const ComplexStructure& cs) {
    const int n = cs.n();
    AdaptedBasis out;
    std::vector<std::vector<Scalar>> rows;
    std::vector<std::vector<Scalar>> current;  // basis of V_k
    while (static_cast<int>(rows.size()) < n) {
        std::vector<std::vector<Scalar>> span;
        for (const auto& v : current) {
            std::vector<Scalar> a(2 * n), b(2 * n);
            for (int k = 0; k < n; ++k) {
                a[k] = v[k];
                b[n + k] = v[k].conj();
            }
            span.push_back(std::move(a));
            span.push_back(std::move(b));
        }
        std::vector<std::vector<Scalar>> u0;
        if (span.empty()) {
            for (int g = 0; g < 2 * n; ++g) u0.push_back(unit(2 * n, g));
        } else {
            u0 = kernel(ComplexMatrix::from_rows(span));
        }
        std::vector<ComplexMatrix> blocks;
        for (const auto& u : u0) {
            std::vector<ComplexForm> contracted;
            for (int i = 0; i < n; ++i) {
                ComplexForm c(2 * n);
                for (int g = 0; g < 2 * n; ++g)
                    if (!u[g].is_zero()) c += u[g] * interior(cs.dalpha(i), g);
                contracted.push_back(std::move(c));
            }
            blocks.push_back(coefficient_matrix(contracted));
        }
        auto next = common_kernel(blocks, n);
        int added = extend_basis(rows, next);
        if (added == 0) throw InvalidStructure("J is not nilpotent");
        if (out.blocks.empty()) out.closed = added;
        out.blocks.push_back(added);
        current = std::move(next);
    }
    out.t = ComplexMatrix::from_rows(rows);
    return out;
}

IdealRestriction restrict_to_jinvariant_ideal(const ComplexStructure& cs, const ComplexForm& omega,
                                              const ComplexForm& closed_form) {
    const int n = cs.n();
    if (n < 2) throw InvalidStructure("restriction needs n >= 2");
    std::vector<Scalar> a;
    try {
        a = one_form_coefficients(closed_form);
    } catch (const std::invalid_argument&) {
        throw InvalidStructure("restriction needs a (1,0)-form");
    }
    if (closed_form.is_zero()) throw InvalidStructure("the (1,0)-form is zero");
    if (!cs.d(closed_form).is_zero()) throw InvalidStructure("the (1,0)-form is not closed");

    ComplexMatrix t = completed_coframe(a, n, false);
    auto t_inv = inverse(t);
    ComplexStructure adapted = cs.with_coframe(t);
    ComplexForm om = change_coframe(omega, *t_inv);
    auto keep = all_but(n, 0);
    std::vector<ComplexForm> eqs;
    for (int j = 1; j < n; ++j) eqs.push_back(restrict_generators(adapted.dalpha(j), keep));
    IdealRestriction out;
    out.h = ComplexStructure::from_equations(n - 1, std::move(eqs));
    out.omega = restrict_generators(om, keep);
    out.coframe = std::move(t);
    return out;
}

BExtensionQuotient b_extension_quotient(const ComplexStructure& cs, const ComplexForm& omega) {
    const int n = cs.n();
    auto series = ascending_series(cs);
    if (series.terms.size() < 2) throw InvalidStructure("J is strongly non-nilpotent: no b-extension");
    BExtensionQuotient out;
    out.x = series.terms[1].front();
    auto values = cs.evaluate_coframe(out.x);
    // (1,0)-forms vanishing on b, completed by a form that does not
    auto vanishing = kernel(ComplexMatrix::from_rows({values}));
    vanishing = row_space(ComplexMatrix::from_rows(vanishing));
    std::size_t pivot = 0;
    while (values[pivot].is_zero()) ++pivot;
    vanishing.push_back(unit(n, pivot));
    ComplexMatrix t = ComplexMatrix::from_rows(vanishing);
    auto t_inv = inverse(t);
    if (!t_inv) throw std::logic_error("b-adapted coframe is singular");
    ComplexStructure adapted = cs.with_coframe(t);
    auto keep = all_but(n, n - 1);
    std::vector<ComplexForm> eqs;
    for (int j = 0; j < n - 1; ++j) {
        const ComplexForm& dj = adapted.dalpha(j);
        for (const auto& [m, c] : dj.terms())
            if (test_bit(m, n - 1) || test_bit(m, 2 * n - 1))
                throw std::logic_error("b is not central in the adapted coframe");
        eqs.push_back(restrict_generators(dj, keep));
    }
    out.k = ComplexStructure::from_equations(n - 1, std::move(eqs));
    ComplexForm om = change_coframe(omega, *t_inv);
    ComplexForm inner = -Scalar::i() * interior(interior(om, n - 1), 2 * n - 1);
    out.omega = restrict_generators(inner, keep);
    out.omega_k = restrict_generators(om, keep);
    out.coframe = std::move(t);
    return out;
}

ComplexStructure structure_from_json(const nlohmann::json& j) {
    if (j.contains("dalpha")) {
        const auto& eqs = j.at("dalpha");
        int n = j.value("n", 0);
        for (auto it = eqs.begin(); it != eqs.end(); ++it) {
            const std::string& key = it.key();
            if (key.size() < 2 || key[0] != 'a') throw ParseError("equation keys look like a3: '" + key + "'", 0);
            n = std::max(n, std::stoi(key.substr(1)));
        }
        ParamMap params;
        if (j.contains("params"))
            for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
                params[it.key()] = scalar_from_json(it.value());
        std::vector<ComplexForm> dalpha(n, ComplexForm(2 * n));
        for (auto it = eqs.begin(); it != eqs.end(); ++it) {
            int k = std::stoi(it.key().substr(1)) - 1;
            try {
                dalpha[k] = parse_form(n, it.value().get<std::string>(), params);
            } catch (const ParseError& e) {
                throw ParseError("in d" + it.key() + ": " + e.what(), e.column());
            }
        }
        return ComplexStructure::from_equations(n, std::move(dalpha));
    }
    if (j.contains("J")) {
        LieAlgebra g = algebra_from_json(j.contains("algebra") ? j.at("algebra") : j);
        std::vector<std::vector<Rational>> rows;
        for (const auto& r : j.at("J")) {
            std::vector<Rational> row;
            for (const auto& x : r) row.push_back(x.is_string() ? parse_rational(x.get<std::string>())
                                                                : Rational(x.get<long long>()));
            rows.push_back(std::move(row));
        }
        for (const auto& r : rows)
            if (r.size() != rows.size()) throw InvalidStructure("J must be square");
        return ComplexStructure::from_J(g, RationalMatrix::from_rows(rows));
    }
    throw InvalidStructure("complex structure JSON needs \"dalpha\" or \"J\"");
}

nlohmann::json structure_to_json(const ComplexStructure& cs) {
    nlohmann::json eqs = nlohmann::json::object();
    for (int j = 0; j < cs.n(); ++j) eqs["a" + std::to_string(j + 1)] = format_form(cs.dalpha(j));
    return {{"n", cs.n()}, {"dalpha", eqs}};
}

}  // namespace pkl
