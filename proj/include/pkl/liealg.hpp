#pragma once

// Real Lie algebras given by structure constants [e_i, e_j] = sum_k c^k_ij e_k
// (0-based internally, 1-based in every external format).
//
// Dual coframe convention: d phi(X, Y) = -phi([X, Y]), hence
//   d e^k = - sum_{i<j} c^k_ij e^i ^ e^j.

#include "pkl/exterior.hpp"
#include "pkl/form_io.hpp"
#include "pkl/matrix.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace pkl {

using RationalVector = std::vector<Rational>;

class InvalidAlgebra : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class LieAlgebra {
public:
    LieAlgebra() = default;
    explicit LieAlgebra(int dim);

    int dim() const { return dim_; }
    const Rational& c(int i, int j, int k) const { return c_[index(i, j, k)]; }

    /// Sets [e_i, e_j] = sum_k value[k] e_k and the antisymmetric partner.
    void set_bracket(int i, int j, const RationalVector& value);
    /// Adds coefficient to c^k_ij (and subtracts it from c^k_ji).
    void add_constant(int i, int j, int k, const Rational& coeff);

    RationalVector bracket(const RationalVector& x, const RationalVector& y) const;
    RationalVector bracket_basis(int i, int j) const;
    /// Matrix of ad_x, column j = [x, e_j].
    RationalMatrix ad(const RationalVector& x) const;

    /// d e^k as a form over the real coframe (rank dim).
    ComplexForm d_generator(int k) const;
    Differential differential() const;

    bool is_abelian() const;
    friend bool operator==(const LieAlgebra&, const LieAlgebra&) = default;

    /// Algebra with the same brackets written in the basis f_j = sum_i P(i,j) e_i.
    LieAlgebra change_basis(const RationalMatrix& p) const;

    /// Reads structure constants back from an arbitrary antiderivation on the
    /// real coframe (inverse of differential()). Throws if some d e^k has
    /// a component outside degree 2 or a non-real coefficient.
    static LieAlgebra from_differential(const std::vector<ComplexForm>& de);

private:
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
    }
    int dim_ = 0;
    std::vector<Rational> c_;
};

struct JacobiCheck {
    bool ok = true;
    int i = -1, j = -1, k = -1;  ///< first violating triple (0-based)
    RationalVector residual;     ///< [[e_i,e_j],e_k] + cyclic
};
JacobiCheck check_jacobi(const LieAlgebra& g);

/// Throws InvalidAlgebra naming the first violating triple.
void require_jacobi(const LieAlgebra& g);

struct AlgebraInvariants {
    std::vector<RationalVector> center_basis;
    std::vector<int> lower_central_series_dims;  ///< dim g, dim [g,g], dim [g,[g,g]], ...
    bool is_nilpotent = false;
    bool is_unimodular = false;
    std::optional<std::vector<RationalVector>> abelian_codim1_ideal;
};
AlgebraInvariants algebra_invariants(const LieAlgebra& g);

/// Basis of the subspace spanned by the given vectors (RREF rows).
std::vector<RationalVector> span_basis(const std::vector<RationalVector>& vectors, std::size_t dim);
/// Vectors annihilating the span (rows phi with phi(v) = 0).
std::vector<RationalVector> annihilator(const std::vector<RationalVector>& vectors, std::size_t dim);

LieAlgebra algebra_from_json(const nlohmann::json& j);
nlohmann::json algebra_to_json(const LieAlgebra& g);

}  // namespace pkl
