#pragma once

// Families and named examples of complex structures on Lie algebras.

#include "pkl/cxstruct.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace pkl {

class CatalogError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// 8-dimensional strongly non-nilpotent families.
/// family 1 params: eps, nu, a, b (delta = +-1 separately)
/// family 2 params: eps, mu, nu, a, b
ComplexStructure build_snn8(int family, const std::vector<Rational>& params, int delta = 1);
bool snn8_admissible(int family, const std::vector<Rational>& params, int delta = 1);

/// The 3-form whose differential obstructs 2-Kahler forms on the family:
/// b a14_b1 - a a13_b2 for family 1, a14_b1 + (1 - mu) a12_b3 for family 2.
ComplexForm snn8_obstruction_beta(int family, const std::vector<Rational>& params);
/// Family and parameters encoded in a catalog name "snn8f<k>:...", if any.
std::optional<std::pair<int, std::vector<Rational>>> snn8_from_name(const std::string& name);

/// Admissible tuples whose free entries run over the grid {0, +-1, +-1/2, +-2},
/// at most `per_free` values per free entry.
std::vector<std::vector<Rational>> snn8_samples(int family, int per_free = 5);

/// ad(e_{2n}) on a = span(e_1..e_{2n-1}) is (lambda 0 // v A) with A acting on
/// a_1 = span(e_2..e_{2n-1}) and J e_j = e_{2n+1-j}. v and A are indexed from 0
/// for e_2..e_{2n-1}.
struct AlmostAbelianData {
    int n = 0;
    Rational lambda;
    RationalVector v;
    RationalMatrix A;

    bool is_unimodular() const;
};

/// J_1 on a_1 in the basis e_2..e_{2n-1}.
RationalMatrix almost_abelian_j1(int n);
void require_integrable(const AlmostAbelianData& d);

ComplexStructure build_almost_abelian(const AlmostAbelianData& d);
/// (lambda, v, A) read back from the adapted basis of a built algebra.
AlmostAbelianData read_almost_abelian(const ComplexStructure& cs);

struct AlmostAbelianKahler {
    bool kahler = false;
    std::string reason;
    /// when kahler: e_1' = e_1 + u kills v, G is a J_1-invariant inner product on
    /// a_1 for which A is skew, and omega is the resulting Kahler form in the
    /// coframe of the built structure
    RationalVector u;
    RationalMatrix G;
    std::optional<ComplexForm> omega;
};
AlmostAbelianKahler kahler_decision_almost_abelian(const AlmostAbelianData& d);

/// Minimal polynomial over Q, low degree first, monic.
std::vector<Rational> minimal_polynomial(const RationalMatrix& a);
/// Number of distinct real roots of a squarefree polynomial in (lo, hi].
int sturm_count(const std::vector<Rational>& poly, const Rational& lo, const Rational& hi);
/// Semisimple with purely imaginary spectrum.
bool semisimple_imaginary(const RationalMatrix& a);

struct CatalogEntry {
    std::string name;
    std::string description;
};
std::vector<CatalogEntry> catalog_list();
/// Registry names plus parametrised forms "snn8f1:eps,nu,a,b[,delta]",
/// "snn8f2:eps,mu,nu,a,b" and "torus<n>".
ComplexStructure named_example(const std::string& name);

AlmostAbelianData almost_abelian_from_json(const nlohmann::json& j);
nlohmann::json almost_abelian_to_json(const AlmostAbelianData& d);

}  // namespace pkl
