#pragma once

// JSON reports carrying certificates, and their exact re-verification.
// Every report embeds the structure it was computed on under "structure".

#include "pkl/catalog.hpp"
#include "pkl/pkahler.hpp"

#include <json.hpp>

#include <string>

namespace pkl {

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const RationalMatrix& m);
RationalMatrix rational_matrix_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const TransversalityVerdict& v);
TransversalityVerdict verdict_from_json(const nlohmann::json& j);

nlohmann::json classify_report(const ComplexStructure& cs);
nlohmann::json find_report(const ComplexStructure& cs, const PKahlerReport& r);
PKahlerReport pkahler_report_from_json(int n, const nlohmann::json& j);
nlohmann::json obstruction_report(const ComplexStructure& cs, const ObstructionCertificate& cert);
ObstructionCertificate obstruction_from_json(int n, const nlohmann::json& j);
nlohmann::json restrict_report(const ComplexStructure& cs, const ComplexForm& omega, int p,
                               const IdealRestriction& red);
nlohmann::json quotient_report(const ComplexStructure& cs, const ComplexForm& omega, int p,
                               const BExtensionQuotient& q);
nlohmann::json aab_report(const AlmostAbelianData& d, const AlmostAbelianKahler& k);

struct VerifyOutcome {
    bool ok = false;
    std::string message;
};
/// Re-checks a report produced by any of the functions above.
VerifyOutcome verify_json_report(const nlohmann::json& report);

}  // namespace pkl
