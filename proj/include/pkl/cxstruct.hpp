#pragma once

// Complex structures on real Lie algebras.
//
// A ComplexStructure carries both representations of (g, J): the real
// algebra with the endomorphism J, and a (1,0)-coframe
//   alpha^j = sum_a P(j, a) e^a
// with the complex structure equations d alpha^j written in that coframe.
// Equation-mode input uses the canonical real model alpha^j = e^{2j-1} + i e^{2j},
// for which J e_{2j-1} = e_{2j}.

#include "pkl/liealg.hpp"

#include <optional>
#include <string>

namespace pkl {

class InvalidStructure : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ComplexStructure {
public:
    ComplexStructure() = default;

    /// dalpha[j] = d alpha^{j+1}, forms over the complex coframe of dimension n.
    static ComplexStructure from_equations(int n, std::vector<ComplexForm> dalpha);
    static ComplexStructure from_J(const LieAlgebra& g, const RationalMatrix& j);
    /// P is n x 2n; its rows must span a complement of their conjugates.
    static ComplexStructure from_coframe(const LieAlgebra& g, const ComplexMatrix& p);

    int n() const { return n_; }
    const LieAlgebra& algebra() const { return g_; }
    const RationalMatrix& J() const { return j_; }
    const ComplexMatrix& coframe() const { return p_; }
    const Differential& differential() const { return d_; }
    const ComplexForm& dalpha(int j) const { return d_.of_generator(j); }  ///< 0-based
    ComplexForm d(const ComplexForm& f) const { return d_(f); }

    /// Same structure in the coframe alpha'^j = sum_k T(j,k) alpha^k.
    ComplexStructure with_coframe(const ComplexMatrix& t) const;

    /// Real form over e^1..e^{2n} rewritten in the alpha coframe, and back.
    ComplexForm from_real(const ComplexForm& real_form) const;
    ComplexForm to_real(const ComplexForm& f) const;
    /// alpha^j(X) for a real vector X.
    std::vector<Scalar> evaluate_coframe(const RationalVector& x) const;

private:
    void build_differential();
    int n_ = 0;
    LieAlgebra g_;
    RationalMatrix j_;
    ComplexMatrix p_;
    ComplexMatrix inv_;  ///< [P; conj P]^{-1}: e^a = sum_k inv(a, k) theta_k
    Differential d_;
};

/// Nijenhuis test and the bidegree test on d(Lambda^{1,0}), which must agree.
struct IntegrabilityCheck {
    bool integrable = true;
    int x = -1, y = -1;         ///< basis pair with N_J(e_x, e_y) != 0 (0-based)
    RationalVector nijenhuis;   ///< N_J(e_x, e_y)
};
IntegrabilityCheck check_integrability(const LieAlgebra& g, const RationalMatrix& j);
RationalVector nijenhuis(const LieAlgebra& g, const RationalMatrix& j, const RationalVector& x,
                         const RationalVector& y);

/// Basis of the +i eigenspace of J acting on covectors, as rows (n x 2n).
ComplexMatrix holomorphic_coframe(const RationalMatrix& j);

enum class JClass { SNN, WEAKLY_NON_NILPOTENT, NILPOTENT };
std::string to_string(JClass c);

struct AscendingSeries {
    std::vector<std::vector<RationalVector>> terms;  ///< terms[k] = basis of a_k, terms[0] empty
    int stabilization = 0;                           ///< first k with a_k = a_{k+1}
    JClass classification = JClass::SNN;
};
AscendingSeries ascending_series(const ComplexStructure& cs);

struct AdaptedBasis {
    ComplexMatrix t;          ///< new coframe rows in terms of the old alpha
    int closed = 0;           ///< leading closed elements
    std::vector<int> blocks;  ///< sizes of the successive extraction steps
};
/// d alpha'^{j+1} lies in the ideal generated by alpha'^1..alpha'^j.
AdaptedBasis salamon_basis(const ComplexStructure& cs);
/// d alpha'^{j+1} lies in Lambda^2 <alpha'^1..alpha'^j, conjugates>. Throws
/// InvalidStructure when J is not nilpotent.
AdaptedBasis nilpotent_basis(const ComplexStructure& cs);

struct IdealRestriction {
    ComplexStructure h;
    ComplexForm omega;      ///< restricted form on h
    ComplexMatrix coframe;  ///< adapted coframe of g with alpha'^1 = alpha
};
IdealRestriction restrict_to_jinvariant_ideal(const ComplexStructure& cs, const ComplexForm& omega,
                                              const ComplexForm& closed_form);

struct BExtensionQuotient {
    ComplexStructure k;
    ComplexForm omega;        ///< coefficient of i alpha'^{n,nbar}
    ComplexForm omega_k;      ///< part free of alpha'^n and its conjugate
    RationalVector x;         ///< b = span(X, JX)
    ComplexMatrix coframe;    ///< adapted coframe of g
};
BExtensionQuotient b_extension_quotient(const ComplexStructure& cs, const ComplexForm& omega);

ComplexStructure structure_from_json(const nlohmann::json& j);
/// Equation-mode encoding in the working coframe.
nlohmann::json structure_to_json(const ComplexStructure& cs);

}  // namespace pkl
