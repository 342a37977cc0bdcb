#include "pkl/report.hpp"

#include "pkl/form_io.hpp"

namespace pkl {

using nlohmann::json;

namespace {

json forms_to_json(const std::vector<ComplexForm>& fs) {
    json a = json::array();
    for (const auto& f : fs) a.push_back(form_to_json(f));
    return a;
}

std::vector<ComplexForm> forms_from_json(int n, const json& j) {
    std::vector<ComplexForm> out;
    for (const auto& f : j) out.push_back(form_from_json(n, f));
    return out;
}

json rationals_to_json(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

std::vector<Rational> rationals_from_json(const json& j) {
    std::vector<Rational> out;
    for (const auto& x : j) {
        Scalar s = scalar_from_json(x);
        if (!s.is_real()) throw std::invalid_argument("expected a rational entry");
        out.push_back(s.re);
    }
    return out;
}

Transversality status_from_string(const std::string& s) {
    if (s == "TRANSVERSE") return Transversality::TRANSVERSE;
    if (s == "NOT_TRANSVERSE") return Transversality::NOT_TRANSVERSE;
    if (s == "INCONCLUSIVE") return Transversality::INCONCLUSIVE;
    throw std::invalid_argument("unknown transversality status '" + s + "'");
}

PKVerdict pk_from_string(const std::string& s) {
    if (s == "FOUND") return PKVerdict::FOUND;
    if (s == "REFUTED") return PKVerdict::REFUTED;
    if (s == "INCONCLUSIVE") return PKVerdict::INCONCLUSIVE;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

ComplexMatrix complex_matrix_from_json(const json& j) {
    const std::size_t rows = j.size(), cols = rows ? j[0].size() : 0;
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) throw std::invalid_argument("ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_json(j[r][c]);
    }
    return m;
}

json matrix_to_json(const RationalMatrix& m) { return matrix_to_json(to_complex(m)); }

RationalMatrix rational_matrix_from_json(const json& j) {
    ComplexMatrix c = complex_matrix_from_json(j);
    RationalMatrix m(c.rows(), c.cols());
    for (std::size_t r = 0; r < c.rows(); ++r)
        for (std::size_t k = 0; k < c.cols(); ++k) {
            if (!c(r, k).is_real()) throw std::invalid_argument("expected a rational matrix");
            m(r, k) = c(r, k).re;
        }
    return m;
}

json verdict_to_json(const TransversalityVerdict& v) {
    json j;
    j["status"] = to_string(v.status);
    j["method"] = v.method;
    if (!v.minors.empty()) j["minors"] = rationals_to_json(v.minors);
    if (v.witness) j["witness"] = {{"columns", matrix_to_json(v.witness->columns)}, {"value", scalar_to_json(v.witness->value)}};
    if (v.restarts) j["restarts"] = v.restarts;
    if (v.method == "search" || v.status == Transversality::INCONCLUSIVE) j["min_margin"] = v.min_margin;
    return j;
}

TransversalityVerdict verdict_from_json(const json& j) {
    TransversalityVerdict v;
    v.status = status_from_string(j.at("status").get<std::string>());
    v.method = j.value("method", "");
    if (j.contains("minors")) v.minors = rationals_from_json(j.at("minors"));
    if (j.contains("witness"))
        v.witness = SimpleFormWitness{complex_matrix_from_json(j.at("witness").at("columns")),
                                      scalar_from_json(j.at("witness").at("value"))};
    v.restarts = j.value("restarts", 0);
    v.min_margin = j.value("min_margin", 0.0);
    return v;
}

json classify_report(const ComplexStructure& cs) {
    auto inv = algebra_invariants(cs.algebra());
    json j;
    j["command"] = "classify";
    j["structure"] = structure_to_json(cs);
    j["nilpotent"] = inv.is_nilpotent;
    j["unimodular"] = inv.is_unimodular;
    j["center_dim"] = inv.center_basis.size();
    j["lower_central_series"] = inv.lower_central_series_dims;
    j["almost_abelian"] = inv.abelian_codim1_ideal.has_value();
    if (inv.is_nilpotent) {
        auto s = ascending_series(cs);
        j["classification"] = to_string(s.classification);
        j["a1_dim"] = s.terms.size() > 1 ? s.terms[1].size() : 0;
        json dims = json::array();
        for (const auto& t : s.terms) dims.push_back(t.size());
        j["ascending_series"] = dims;
        if (s.classification == JClass::NILPOTENT) j["t"] = stnilp_degree(cs).t;
    }
    return j;
}

json find_report(const ComplexStructure& cs, const PKahlerReport& r) {
    json j;
    j["command"] = "find";
    j["structure"] = structure_to_json(cs);
    j["p"] = r.p;
    j["verdict"] = to_string(r.verdict);
    j["empty_cone"] = r.empty_cone;
    j["closed_basis"] = forms_to_json(r.closed_basis);
    if (r.form) j["form"] = form_to_json(*r.form);
    if (r.form_verdict) j["form_verdict"] = verdict_to_json(*r.form_verdict);
    if (r.refutation) {
        json w = json::array();
        for (const auto& m : r.refutation->witnesses) w.push_back(matrix_to_json(m));
        j["refutation"] = {{"witnesses", w}, {"multipliers", rationals_to_json(r.refutation->multipliers)}};
    }
    j["rounds"] = r.rounds;
    j["witness_count"] = r.witness_count;
    j["note"] = r.note;
    return j;
}

PKahlerReport pkahler_report_from_json(int n, const json& j) {
    PKahlerReport r;
    r.p = j.at("p").get<int>();
    r.verdict = pk_from_string(j.at("verdict").get<std::string>());
    r.empty_cone = j.value("empty_cone", false);
    r.closed_basis = forms_from_json(n, j.at("closed_basis"));
    if (j.contains("form")) r.form = form_from_json(n, j.at("form"));
    if (j.contains("form_verdict")) r.form_verdict = verdict_from_json(j.at("form_verdict"));
    if (j.contains("refutation")) {
        WitnessRefutation w;
        for (const auto& m : j.at("refutation").at("witnesses")) w.witnesses.push_back(complex_matrix_from_json(m));
        w.multipliers = rationals_from_json(j.at("refutation").at("multipliers"));
        r.refutation = std::move(w);
    }
    r.rounds = j.value("rounds", 0);
    r.witness_count = j.value("witness_count", 0);
    r.note = j.value("note", "");
    return r;
}

json obstruction_report(const ComplexStructure& cs, const ObstructionCertificate& cert) {
    json j;
    j["command"] = "obstruct";
    j["structure"] = structure_to_json(cs);
    j["p"] = cert.p;
    j["verdict"] = "OBSTRUCTED";
    j["beta"] = form_to_json(cert.beta);
    j["d_beta"] = form_to_json(cert.d_beta);
    j["d_beta_component"] = form_to_json(cert.d_beta_component);
    json terms = json::array();
    for (const auto& t : cert.decomposition) terms.push_back({{"c", scalar_to_json(t.c)}, {"psi", form_to_json(t.psi)}});
    j["decomposition"] = terms;
    return j;
}

ObstructionCertificate obstruction_from_json(int n, const json& j) {
    ObstructionCertificate c;
    c.p = j.at("p").get<int>();
    c.beta = form_from_json(n, j.at("beta"));
    c.d_beta = form_from_json(n, j.at("d_beta"));
    c.d_beta_component = form_from_json(n, j.at("d_beta_component"));
    for (const auto& t : j.at("decomposition"))
        c.decomposition.push_back({scalar_from_json(t.at("c")), form_from_json(n, t.at("psi"))});
    return c;
}

json restrict_report(const ComplexStructure& cs, const ComplexForm& omega, int p, const IdealRestriction& red) {
    json j;
    j["command"] = "restrict";
    j["structure"] = structure_to_json(cs);
    j["p"] = p;
    j["omega"] = form_to_json(omega);
    j["closed_form"] = form_to_json(one_form(cs.n(), red.coframe.row(0)));
    j["ideal"] = structure_to_json(red.h);
    j["restricted"] = form_to_json(red.omega);
    j["restricted_closed"] = red.h.d(red.omega).is_zero();
    j["restricted_verdict"] = verdict_to_json(check_transverse(red.omega, p));
    return j;
}

json quotient_report(const ComplexStructure& cs, const ComplexForm& omega, int p, const BExtensionQuotient& q) {
    json j;
    j["command"] = "quotient";
    j["structure"] = structure_to_json(cs);
    j["p"] = p;
    j["omega"] = form_to_json(omega);
    j["quotient"] = structure_to_json(q.k);
    j["extracted"] = form_to_json(q.omega);
    j["extracted_closed"] = q.k.d(q.omega).is_zero();
    j["extracted_verdict"] = verdict_to_json(check_transverse(q.omega, p - 1));
    json x = json::array();
    for (const auto& v : q.x) x.push_back(to_string(v));
    j["b_generator"] = x;
    return j;
}

json aab_report(const AlmostAbelianData& d, const AlmostAbelianKahler& k) {
    json j;
    j["command"] = "aab-kahler";
    j["data"] = almost_abelian_to_json(d);
    j["kahler"] = k.kahler;
    j["reason"] = k.reason;
    if (k.kahler) {
        j["u"] = rationals_to_json(k.u);
        j["G"] = matrix_to_json(k.G);
        j["omega"] = form_to_json(*k.omega);
    }
    return j;
}

VerifyOutcome verify_json_report(const json& report) {
    const std::string cmd = report.value("command", "");
    try {
        if (cmd == "aab-kahler") {
            AlmostAbelianData d = almost_abelian_from_json(report.at("data"));
            const bool claimed = report.at("kahler").get<bool>();
            if (!claimed) {
                auto k = kahler_decision_almost_abelian(d);
                if (k.kahler) return {false, "data admits the Kahler conjugation"};
                return {true, "negative decision reproduced: " + k.reason};
            }
            require_integrable(d);
            auto u = rationals_from_json(report.at("u"));
            RationalMatrix g = rational_matrix_from_json(report.at("G"));
            RationalMatrix j1 = almost_abelian_j1(d.n);
            RationalVector au = d.A * u;
            for (std::size_t k = 0; k < au.size(); ++k)
                if (au[k] + d.v[k] != 0) return {false, "A u != -v"};
            if (d.lambda != 0) return {false, "lambda != 0"};
            if (!(g == g.transpose()) || !(j1.transpose() * g * j1 == g) ||
                !(d.A.transpose() * g + g * d.A).is_zero())
                return {false, "G is not an invariant metric for A"};
            if (!is_positive_definite(to_complex(g))) return {false, "G is not positive definite"};
            auto cs = build_almost_abelian(d);
            ComplexForm omega = form_from_json(d.n, report.at("omega"));
            if (!cs.d(omega).is_zero()) return {false, "Kahler form is not closed"};
            if (!is_positive_definite(gram_matrix(omega, 1))) return {false, "Kahler form is not positive"};
            return {true, "Kahler conjugation verified"};
        }
        ComplexStructure cs = structure_from_json(report.at("structure"));
        const int n = cs.n();
        if (cmd == "find") {
            PKahlerReport r = pkahler_report_from_json(n, report);
            if (r.verdict == PKVerdict::INCONCLUSIVE) return {true, "INCONCLUSIVE carries no certificate"};
            if (!verify_report(cs, r)) return {false, to_string(r.verdict) + " certificate failed"};
            return {true, to_string(r.verdict) + " certificate verified"};
        }
        if (cmd == "obstruct") {
            auto cert = obstruction_from_json(n, report);
            if (!verify_obstruction(cs, cert)) return {false, "obstruction certificate failed"};
            return {true, "obstruction certificate verified"};
        }
        if (cmd == "restrict") {
            const int p = report.at("p").get<int>();
            ComplexForm omega = form_from_json(n, report.at("omega"));
            ComplexForm a = form_from_json(n, report.at("closed_form"));
            auto red = restrict_to_jinvariant_ideal(cs, omega, a);
            ComplexForm claimed = form_from_json(n - 1, report.at("restricted"));
            if (!(claimed == red.omega)) return {false, "restricted form differs"};
            if (!red.h.d(red.omega).is_zero()) return {false, "restricted form is not closed"};
            if (report.at("restricted_closed").get<bool>() != true) return {false, "report claims non-closed"};
            auto v = verdict_from_json(report.at("restricted_verdict"));
            if (!verify_verdict(red.omega, p, v)) return {false, "restricted verdict failed"};
            return {true, "restriction verified (" + to_string(v.status) + ")"};
        }
        if (cmd == "quotient") {
            const int p = report.at("p").get<int>();
            ComplexForm omega = form_from_json(n, report.at("omega"));
            auto q = b_extension_quotient(cs, omega);
            ComplexForm claimed = form_from_json(n - 1, report.at("extracted"));
            if (!(claimed == q.omega)) return {false, "extracted form differs"};
            if (q.k.d(q.omega).is_zero() != report.at("extracted_closed").get<bool>())
                return {false, "closedness claim is wrong"};
            auto v = verdict_from_json(report.at("extracted_verdict"));
            if (!verify_verdict(q.omega, p - 1, v)) return {false, "extracted verdict failed"};
            return {true, "quotient verified (" + to_string(v.status) + ")"};
        }
        if (cmd == "classify") {
            json again = classify_report(cs);
            if (again != report) return {false, "classification differs on recomputation"};
            return {true, "classification reproduced"};
        }
        if (cmd == "validate") return {true, "structure validates"};
    } catch (const std::exception& e) {
        return {false, std::string("malformed report: ") + e.what()};
    }
    return {false, "unknown report command '" + cmd + "'"};
}

}  // namespace pkl
