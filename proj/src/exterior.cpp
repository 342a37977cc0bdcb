#include "pkl/exterior.hpp"

#include <algorithm>

namespace pkl {

namespace {
std::vector<int> bit_list(Mask m) {
    std::vector<int> out;
    for (; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
}

template <class T>
BasicForm<T> conjugate_impl(const BasicForm<T>& f) {
    if (f.rank() % 2) throw DimensionMismatch("conjugation needs a complex coframe");
    const int n = f.rank() / 2;
    BasicForm<T> out(f.rank());
    for (const auto& [m, c] : f.terms()) {
        Mask h = holo_part(m, n), a = anti_part(m, n);
        // conj(alpha^H ^ abar^A) = abar^H ^ alpha^A = (-1)^{|H||A|} alpha^A ^ abar^H
        T cc = conj(c);
        if ((popcount(h) * popcount(a)) & 1) cc = -cc;
        out.add_term(make_mask(n, a, h), cc);
    }
    return out;
}
}  // namespace

Mask to_mask(int n, const MultiIndex& idx) {
    Mask h = 0, a = 0;
    auto fill = [n](const std::vector<int>& list, Mask& m) {
        int prev = 0;
        for (int j : list) {
            if (j <= prev || j > n) throw std::invalid_argument("multi-index must be strictly increasing in 1..n");
            m |= Mask(1) << (j - 1);
            prev = j;
        }
    };
    fill(idx.holo, h);
    fill(idx.anti, a);
    return make_mask(n, h, a);
}

MultiIndex to_multi_index(int n, Mask m) {
    MultiIndex idx;
    for (int j : bit_list(holo_part(m, n))) idx.holo.push_back(j + 1);
    for (int j : bit_list(anti_part(m, n))) idx.anti.push_back(j + 1);
    return idx;
}

bool monomial_less(int n, Mask a, Mask b) {
    int da = popcount(a), db = popcount(b);
    if (da != db) return da < db;
    auto ia = to_multi_index(n, a), ib = to_multi_index(n, b);
    return ia < ib;
}

std::vector<Mask> sorted_monomials(int n, const ComplexForm& f) {
    std::vector<Mask> out;
    for (const auto& [m, c] : f.terms()) out.push_back(m);
    std::sort(out.begin(), out.end(), [n](Mask a, Mask b) { return monomial_less(n, a, b); });
    return out;
}

int coframe_dim(const ComplexForm& f) {
    if (f.rank() % 2) throw DimensionMismatch("form is not over a complex coframe");
    return f.rank() / 2;
}

ComplexForm alpha(int n, int j) { return ComplexForm::generator(2 * n, j - 1); }
ComplexForm alpha_bar(int n, int j) { return ComplexForm::generator(2 * n, n + j - 1); }
ComplexForm constant_form(int n, const Scalar& c) { return ComplexForm::monomial(2 * n, 0, c); }

ComplexForm conjugate(const ComplexForm& f) { return conjugate_impl(f); }
FloatForm conjugate(const FloatForm& f) { return conjugate_impl(f); }

ComplexForm bidegree_component(const ComplexForm& f, int p, int q) {
    const int n = coframe_dim(f);
    ComplexForm out(f.rank());
    for (const auto& [m, c] : f.terms())
        if (popcount(holo_part(m, n)) == p && popcount(anti_part(m, n)) == q) out.add_term(m, c);
    return out;
}

bool is_real(const ComplexForm& f) { return conjugate(f) == f; }

std::vector<Mask> subsets(int n, int k) {
    std::vector<Mask> out;
    if (k < 0 || k > n) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        Mask m = 0;
        for (int i : idx) m |= Mask(1) << i;
        out.push_back(m);
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

std::vector<Mask> bidegree_basis(int n, int p, int q) {
    std::vector<Mask> out;
    for (Mask h : subsets(n, p))
        for (Mask a : subsets(n, q)) out.push_back(make_mask(n, h, a));
    return out;
}

Matrix<Scalar> coefficient_matrix(const std::vector<ComplexForm>& forms) {
    std::map<Mask, std::size_t> rows;
    for (const auto& f : forms)
        for (const auto& [m, c] : f.terms()) rows.emplace(m, 0);
    std::size_t r = 0;
    for (auto& [m, idx] : rows) idx = r++;
    Matrix<Scalar> out(rows.size(), forms.size());
    for (std::size_t j = 0; j < forms.size(); ++j)
        for (const auto& [m, c] : forms[j].terms()) out(rows[m], j) = c;
    return out;
}

ComplexForm change_coframe(const ComplexForm& f, const Matrix<Scalar>& t_inverse) {
    const int n = coframe_dim(f);
    if (static_cast<int>(t_inverse.rows()) != n || static_cast<int>(t_inverse.cols()) != n)
        throw DimensionMismatch("coframe change has the wrong size");
    std::vector<ComplexForm> images;
    for (int k = 0; k < n; ++k) images.push_back(one_form(n, t_inverse.row(k)));
    for (int k = 0; k < n; ++k) images.push_back(conjugate(images[k]));
    return substitute(f, images, 2 * n);
}

ComplexForm one_form(int n, const std::vector<Scalar>& coeffs) {
    ComplexForm f(2 * n);
    for (int j = 0; j < n; ++j) f.add_term(Mask(1) << j, coeffs[j]);
    return f;
}

std::vector<Scalar> one_form_coefficients(const ComplexForm& f) {
    const int n = coframe_dim(f);
    std::vector<Scalar> out(n);
    for (const auto& [m, c] : f.terms()) {
        if (popcount(m) != 1 || anti_part(m, n)) throw std::invalid_argument("not a (1,0)-form");
        out[std::countr_zero(m)] = c;
    }
    return out;
}

ComplexForm standard_kahler(int n) {
    ComplexForm w(2 * n);
    for (int j = 0; j < n; ++j) w.add_term(make_mask(n, Mask(1) << j, Mask(1) << j), Scalar::i());
    return w;
}

ComplexForm divided_power(const ComplexForm& f, int k) {
    ComplexForm out = ComplexForm::monomial(f.rank(), 0);
    for (int j = 1; j <= k; ++j) out = Scalar(Rational(1, j)) * wedge(out, f);
    return out;
}

FloatForm to_float(const ComplexForm& f) {
    FloatForm out(f.rank());
    for (const auto& [m, c] : f.terms()) out.add_term(m, c.to_complex());
    return out;
}

}  // namespace pkl
