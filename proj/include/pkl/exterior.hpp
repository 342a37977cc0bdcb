#pragma once

// Sparse exterior algebra over a fixed set of generators.
//
// A complex coframe of dimension n uses 2n generators: bit j (0 <= j < n) is
// alpha^{j+1}, bit n + j is conj(alpha^{j+1}). Ascending bit order is the
// canonical order (holomorphic indices first, then antiholomorphic), so every
// stored monomial is a bitmask and the sign bookkeeping reduces to counting
// inversions between masks. Real coframes e^1..e^m use m generators directly.

#include "pkl/matrix.hpp"
#include "pkl/scalar.hpp"

#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace pkl {

using Mask = std::uint32_t;
inline constexpr int kMaxGenerators = 32;

inline int popcount(Mask m) { return std::popcount(m); }
inline bool test_bit(Mask m, int g) { return (m >> g) & 1u; }

/// Sign of sorting the concatenation (a, b) of two disjoint sorted generator
/// lists: (-1)^{#{x in a, y in b : x > y}}.
inline int reorder_sign(Mask a, Mask b) {
    int inversions = 0;
    while (b) {
        int y = std::countr_zero(b);
        b &= b - 1;
        Mask above = (y + 1 >= 32) ? 0u : (a >> (y + 1));
        inversions += std::popcount(above);
    }
    return (inversions & 1) ? -1 : 1;
}

inline std::complex<double> conj(const std::complex<double>& z) { return std::conj(z); }
inline bool is_zero(const std::complex<double>& z) { return z == std::complex<double>(0.0, 0.0); }

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

template <class T>
class BasicForm {
public:
    using Coefficient = T;
    using Terms = std::map<Mask, T>;

    BasicForm() = default;
    explicit BasicForm(int rank) : rank_(rank) {
        if (rank < 0 || rank > kMaxGenerators) throw std::invalid_argument("form rank out of range");
    }
    static BasicForm monomial(int rank, Mask m, T c = T(1)) {
        BasicForm f(rank);
        f.add_term(m, c);
        return f;
    }
    static BasicForm generator(int rank, int g) { return monomial(rank, Mask(1) << g); }

    int rank() const { return rank_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    void add_term(Mask m, const T& c) {
        if (pkl::is_zero(c)) return;
        if (rank_ < kMaxGenerators && (m >> rank_) != 0)
            throw std::out_of_range("monomial uses generator beyond form rank");
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (pkl::is_zero(it->second)) terms_.erase(it);
        }
    }
    T coefficient(Mask m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? T{} : it->second;
    }

    /// Highest degree present; -1 for the zero form.
    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, popcount(m));
        return d;
    }
    bool is_homogeneous() const {
        int d = -1;
        for (const auto& [m, c] : terms_) {
            if (d >= 0 && popcount(m) != d) return false;
            d = popcount(m);
        }
        return true;
    }
    BasicForm homogeneous_part(int deg) const {
        BasicForm out(rank_);
        for (const auto& [m, c] : terms_)
            if (popcount(m) == deg) out.terms_.emplace(m, c);
        return out;
    }

    BasicForm& operator+=(const BasicForm& o) {
        check_rank(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    BasicForm& operator-=(const BasicForm& o) {
        check_rank(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    BasicForm& operator*=(const T& s) {
        if (pkl::is_zero(s)) { terms_.clear(); return *this; }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    BasicForm operator-() const {
        BasicForm out(*this);
        for (auto& [m, c] : out.terms_) c = -c;
        return out;
    }
    friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
    friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
    friend BasicForm operator*(const T& s, BasicForm a) { return a *= s; }
    friend bool operator==(const BasicForm& a, const BasicForm& b) {
        return a.rank_ == b.rank_ && a.terms_ == b.terms_;
    }

    void check_rank(const BasicForm& o) const {
        if (o.rank_ != rank_) throw DimensionMismatch("forms over different coframes");
    }

private:
    int rank_ = 0;
    Terms terms_;
};

template <class T>
BasicForm<T> wedge(const BasicForm<T>& f, const BasicForm<T>& g) {
    f.check_rank(g);
    BasicForm<T> out(f.rank());
    for (const auto& [mf, cf] : f.terms())
        for (const auto& [mg, cg] : g.terms()) {
            if (mf & mg) continue;
            T c = cf * cg;
            if (reorder_sign(mf, mg) < 0) c = -c;
            out.add_term(mf | mg, c);
        }
    return out;
}

/// Interior product with the dual vector of generator g.
template <class T>
BasicForm<T> interior(const BasicForm<T>& f, int g) {
    BasicForm<T> out(f.rank());
    const Mask bit = Mask(1) << g;
    const Mask below = bit - 1;
    for (const auto& [m, c] : f.terms()) {
        if (!(m & bit)) continue;
        out.add_term(m & ~bit, (popcount(m & below) & 1) ? -c : c);
    }
    return out;
}

/// Pullback along generator g -> images[g] (1-forms over new_rank generators).
template <class T>
BasicForm<T> substitute(const BasicForm<T>& f, const std::vector<BasicForm<T>>& images, int new_rank) {
    if (static_cast<int>(images.size()) != f.rank())
        throw DimensionMismatch("substitution needs one image per generator");
    BasicForm<T> out(new_rank);
    for (const auto& [m, c] : f.terms()) {
        BasicForm<T> acc = BasicForm<T>::monomial(new_rank, 0, c);
        for (Mask rest = m; rest && !acc.is_zero(); rest &= rest - 1)
            acc = wedge(acc, images[std::countr_zero(rest)]);
        out += acc;
    }
    return out;
}

/// Drops every term that involves a generator outside `keep` and renumbers
/// the kept generators consecutively (restriction to a coordinate subspace).
template <class T>
BasicForm<T> restrict_generators(const BasicForm<T>& f, const std::vector<int>& keep) {
    Mask kept = 0;
    for (int g : keep) kept |= Mask(1) << g;
    BasicForm<T> out(static_cast<int>(keep.size()));
    for (const auto& [m, c] : f.terms()) {
        if (m & ~kept) continue;
        Mask nm = 0;
        for (std::size_t k = 0; k < keep.size(); ++k)
            if (test_bit(m, keep[k])) nm |= Mask(1) << k;
        // keep is ascending, so relative order is preserved
        out.add_term(nm, c);
    }
    return out;
}

/// Antiderivation of degree +1 determined by the images of the generators.
template <class T>
class BasicDifferential {
public:
    BasicDifferential() = default;
    explicit BasicDifferential(std::vector<BasicForm<T>> images) : images_(std::move(images)) {
        for (const auto& im : images_)
            if (im.rank() != rank())
                throw DimensionMismatch("differential images must live on the same coframe");
    }

    int rank() const { return static_cast<int>(images_.size()); }
    const BasicForm<T>& of_generator(int g) const { return images_.at(g); }
    const std::vector<BasicForm<T>>& images() const { return images_; }

    BasicForm<T> operator()(const BasicForm<T>& f) const {
        if (f.rank() != rank()) throw DimensionMismatch("differential applied on a foreign coframe");
        BasicForm<T> out(rank());
        for (const auto& [m, c] : f.terms()) {
            int pos = 0;
            for (Mask rest = m; rest; rest &= rest - 1, ++pos) {
                int g = std::countr_zero(rest);
                Mask others = m & ~(Mask(1) << g);
                // d(x_1..x_k) = sum (-1)^pos (dx_g) ^ (others), dx_g has even degree
                for (const auto& [mi, ci] : images_[g].terms()) {
                    if (mi & others) continue;
                    T coeff = ci * c;
                    int sign = reorder_sign(mi, others) * ((pos & 1) ? -1 : 1);
                    if (sign < 0) coeff = -coeff;
                    out.add_term(mi | others, coeff);
                }
            }
        }
        return out;
    }

private:
    std::vector<BasicForm<T>> images_;
};

using ComplexForm = BasicForm<Scalar>;
using FloatForm = BasicForm<std::complex<double>>;
using Differential = BasicDifferential<Scalar>;

// ---------------------------------------------------------------------------
// Complex coframe conventions (rank 2n).

/// Basis monomial alpha^{holo, conj(anti)} with 1-based strictly increasing
/// index lists.
struct MultiIndex {
    std::vector<int> holo;
    std::vector<int> anti;
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

inline Mask holo_part(Mask m, int n) { return m & ((Mask(1) << n) - 1); }
inline Mask anti_part(Mask m, int n) { return m >> n; }
inline Mask make_mask(int n, Mask holo, Mask anti) { return holo | (anti << n); }

Mask to_mask(int n, const MultiIndex& idx);
MultiIndex to_multi_index(int n, Mask m);

/// Order used for canonical listings: degree, then holomorphic list, then
/// antiholomorphic list, lexicographically.
bool monomial_less(int n, Mask a, Mask b);
std::vector<Mask> sorted_monomials(int n, const ComplexForm& f);

/// Coframe dimension n of a complex form (rank 2n).
int coframe_dim(const ComplexForm& f);

ComplexForm alpha(int n, int j);      ///< alpha^j, 1-based
ComplexForm alpha_bar(int n, int j);  ///< conj(alpha^j), 1-based
ComplexForm constant_form(int n, const Scalar& c);

ComplexForm conjugate(const ComplexForm& f);
FloatForm conjugate(const FloatForm& f);
ComplexForm bidegree_component(const ComplexForm& f, int p, int q);
bool is_real(const ComplexForm& f);

/// All masks with |holo| = p and |anti| = q, in canonical listing order.
std::vector<Mask> bidegree_basis(int n, int p, int q);
/// All subsets of {0..n-1} of size k as masks, lexicographic on index lists.
std::vector<Mask> subsets(int n, int k);

FloatForm to_float(const ComplexForm& f);

/// Column i holds the coefficients of forms[i]; rows run over the union of
/// monomials in ascending mask order. Its kernel lists the linear relations.
Matrix<Scalar> coefficient_matrix(const std::vector<ComplexForm>& forms);

/// Pullback along alpha = T^{-1} alpha', i.e. rewrites f in the coframe
/// alpha'^j = sum_k T(j,k) alpha^k.
ComplexForm change_coframe(const ComplexForm& f, const Matrix<Scalar>& t_inverse);

/// Sum_j coeffs[j] alpha^{j+1} (a (1,0)-form).
ComplexForm one_form(int n, const std::vector<Scalar>& coeffs);
std::vector<Scalar> one_form_coefficients(const ComplexForm& f);

/// i alpha^{1,1bar} + ... + i alpha^{n,nbar}.
ComplexForm standard_kahler(int n);
/// f^k / k!.
ComplexForm divided_power(const ComplexForm& f, int k);

}  // namespace pkl
