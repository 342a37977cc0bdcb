#pragma once

// Positivity of real (p,p)-forms over a complex coframe of dimension n.
//
// Reference volume: vol = i alpha^{1,1bar} ^ ... ^ i alpha^{n,nbar}.
// For q = n - p and psi in Lambda^{q,0}:
//   i^{q^2} Omega ^ psi ^ conj(psi) = volume_coefficient(Omega, psi) * vol.
// The Gram matrix G on Lambda^{q,0} (basis alpha^K, K in subsets(n, q)) is
// normalised so that x* G x = volume_coefficient(Omega, sum_K x_K alpha^K).

#include "pkl/exterior.hpp"
#include "pkl/matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pkl {

ComplexForm reference_volume(int n);

/// Throws std::invalid_argument unless f is a real (p,p)-form.
void require_real_pp(const ComplexForm& f, int p);
/// Bidegree p of a non-zero homogeneous (p,p)-form.
int pp_degree(const ComplexForm& f);

Scalar volume_coefficient(const ComplexForm& omega, const ComplexForm& psi);

ComplexMatrix gram_matrix(const ComplexForm& omega, int p);

/// Determinants of the leading principal minors (real for Hermitian input).
std::vector<Rational> leading_minors(const ComplexMatrix& h);
bool is_positive_definite(const ComplexMatrix& h);

/// Hermitian LDL* run up to the first non-positive pivot.
struct PivotWitness {
    bool positive_definite = true;
    std::vector<Scalar> x;  ///< x* H x = value <= 0 when not positive definite
    Rational value;
};
PivotWitness hermitian_pivot_witness(const ComplexMatrix& h);

/// sum_K x_K alpha^K over subsets(n, q).
ComplexForm holomorphic_form(int n, int q, const std::vector<Scalar>& x);

/// Wedge of the column (1,0)-forms of an n x q matrix.
ComplexForm wedge_columns(const ComplexMatrix& columns);
/// Columns whose wedge is exactly psi when psi is a non-zero simple (q,0)-form.
std::optional<ComplexMatrix> factor_simple(const ComplexForm& psi);

struct SearchBudget {
    int restarts = 200;
    int steps = 500;
    double tolerance = 1e-12;
    std::uint64_t seed = 0;
    int threads = 0;  ///< 0 = hardware concurrency
};

enum class Transversality { TRANSVERSE, NOT_TRANSVERSE, INCONCLUSIVE };
std::string to_string(Transversality t);

struct SimpleFormWitness {
    ComplexMatrix columns;  ///< n x q
    Scalar value;           ///< exact volume coefficient, <= 0
};

struct TransversalityVerdict {
    Transversality status = Transversality::INCONCLUSIVE;
    std::string method;                        ///< gram, exact-degree, diagonal, search, none
    std::vector<Rational> minors;              ///< Gram certificate when TRANSVERSE
    std::optional<SimpleFormWitness> witness;  ///< when NOT_TRANSVERSE
    int restarts = 0;
    double min_margin = 0.0;                   ///< smallest normalised value seen by the search
};

TransversalityVerdict check_transverse(const ComplexForm& omega, int p, const SearchBudget& budget = {});
/// Exact re-check of the certificate carried by a verdict.
bool verify_verdict(const ComplexForm& omega, int p, const TransversalityVerdict& v);

struct StrongTerm {
    Rational c;                      ///< > 0
    std::vector<ComplexForm> etas;   ///< p (1,0)-forms
};
/// Omega == sum_j c_j i eta_1 ^ conj(eta_1) ^ ... ^ i eta_p ^ conj(eta_p).
bool verify_strongly_positive(const ComplexForm& omega, const std::vector<StrongTerm>& terms);

struct MichelsohnRoot {
    bool exact = false;
    ComplexForm omega;            ///< exact root (exact mode)
    FloatForm omega_float;        ///< float root (always filled)
    double residual = 0.0;        ///< max |omega^{m-1}/(m-1)! - Phi| coefficient
};
/// Phi real (m-1,m-1) with positive-definite Gram matrix.
MichelsohnRoot michelsohn_root(const ComplexForm& phi);

/// Rational y with sum_i y_i H_i positive definite, tried on the seeds first
/// and then by a float ascent on the smallest eigenvalue.
std::optional<std::vector<Rational>> find_positive_combination(const std::vector<ComplexMatrix>& hs,
                                                               const std::vector<std::vector<Rational>>& seeds,
                                                               const SearchBudget& budget);

}  // namespace pkl
