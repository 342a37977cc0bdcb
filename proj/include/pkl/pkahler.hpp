#pragma once

// p-Kähler decision pipeline on (g, J).
//
// Real (p,p)-forms are coordinatised by mu(I,J) = i^{p^2} alpha^I ^ conj(alpha^J),
// which satisfies conj(mu(I,J)) = mu(J,I). The real basis lists, for I <= J in
// subset order, mu(I,I) or the pair mu(I,J) + mu(J,I), i(mu(I,J) - mu(J,I)).

#include "pkl/cxstruct.hpp"
#include "pkl/positivity.hpp"
#include "pkl/simplex.hpp"

#include <optional>
#include <string>

namespace pkl {

std::vector<ComplexForm> real_pp_basis(int n, int p);

struct ClosedCone {
    std::vector<ComplexForm> basis;           ///< closed real (p,p)-forms
    std::vector<RationalVector> coordinates;  ///< in real_pp_basis
};
ClosedCone closed_pp_space(const ComplexStructure& cs, int p);

enum class PKVerdict { FOUND, REFUTED, INCONCLUSIVE };
std::string to_string(PKVerdict v);

/// Finite family W of simple forms and multipliers u >= 0, sum u = 1, with
/// sum_psi u_psi vol_coeff(B_j, psi) = 0 for every closed basis form B_j.
struct WitnessRefutation {
    std::vector<ComplexMatrix> witnesses;  ///< columns of each psi
    std::vector<Rational> multipliers;
};

struct PKahlerReport {
    int p = 0;
    std::vector<ComplexForm> closed_basis;
    PKVerdict verdict = PKVerdict::INCONCLUSIVE;
    bool empty_cone = false;
    std::optional<ComplexForm> form;                   ///< FOUND
    std::optional<TransversalityVerdict> form_verdict; ///< FOUND
    std::optional<WitnessRefutation> refutation;       ///< REFUTED with non-empty cone
    int rounds = 0;
    std::size_t witness_count = 0;
    std::string note;
};

struct PKahlerOptions {
    SearchBudget search;
    int witness_cap = 200;
};

PKahlerReport find_pkahler(const ComplexStructure& cs, int p, const PKahlerOptions& options = {});
/// Exact re-check of a FOUND or REFUTED report.
bool verify_report(const ComplexStructure& cs, const PKahlerReport& report);

struct ObstructionTerm {
    Scalar c;
    ComplexForm psi;  ///< simple (q,0)-form
};

struct ObstructionCertificate {
    int p = 0;
    ComplexForm beta;
    ComplexForm d_beta;            ///< full d beta
    ComplexForm d_beta_component;  ///< (n-p, n-p) part
    std::vector<ObstructionTerm> decomposition;
};

class ObstructionRejected : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Builds and verifies a certificate; throws ObstructionRejected otherwise.
ObstructionCertificate obstruction_check(const ComplexStructure& cs, int p, const ComplexForm& beta,
                                         const std::optional<std::vector<ObstructionTerm>>& decomposition = {});
bool verify_obstruction(const ComplexStructure& cs, const ObstructionCertificate& cert);
std::optional<ObstructionCertificate> obstruction_search(const ComplexStructure& cs, int p);

struct StnilpResult {
    int t = 0;
    std::optional<int> forbidden_p;
    ComplexMatrix basis;  ///< nilpotent-adapted coframe
};
StnilpResult stnilp_degree(const ComplexStructure& cs);

}  // namespace pkl
