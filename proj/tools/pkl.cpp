// pkl: p-Kahler structures on Lie algebras with complex structure.

#include "pkl/catalog.hpp"
#include "pkl/form_io.hpp"
#include "pkl/pkahler.hpp"
#include "pkl/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace pkl;
using nlohmann::json;

namespace {

constexpr int kDefinitive = 0;
constexpr int kInputError = 1;
constexpr int kInconclusive = 2;

struct RunConfig {
    std::string in;
    std::string catalog;
    std::string config;
    std::string format = "text";
    int p = 0;
    int restarts = 200;
    int steps = 500;
    int witness_cap = 200;
    int threads = 0;
    std::uint64_t seed = 0;
    std::string form, closed, beta, export_name, report;
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // locate the byte offset as line:column
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

const json* find_key(const json& j, const std::string& dotted) {
    if (j.contains(dotted)) return &j.at(dotted);
    const json* cur = &j;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        std::size_t dot = dotted.find('.', start);
        if (dot == std::string::npos) dot = dotted.size();
        std::string key = dotted.substr(start, dot - start);
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &cur->at(key);
        start = dot + 1;
    }
    return cur;
}

bool flag_given(const CLI::App& sub, const char* flag) {
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    return opt && opt->count() > 0;
}

// defaults < config file < PKL_SEED < explicit flags
void apply_config(RunConfig& rc, const CLI::App& sub) {
    if (!rc.config.empty()) {
        json c = read_json(rc.config);
        auto take = [&](const char* key, const char* flag, auto& field) {
            if (flag_given(sub, flag)) return;
            if (const json* v = find_key(c, key)) field = v->get<std::decay_t<decltype(field)>>();
        };
        take("pkl.search.restarts", "--budget-restarts", rc.restarts);
        take("pkl.search.steps", "--budget-steps", rc.steps);
        take("pkl.search.seed", "--seed", rc.seed);
        take("pkl.search.threads", "--threads", rc.threads);
        take("pkl.search.witness_cap", "--witness-cap", rc.witness_cap);
    }
    if (const char* env = std::getenv("PKL_SEED"); env && !flag_given(sub, "--seed")) {
        try {
            rc.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw InputError("PKL_SEED must be a non-negative integer");
        }
    }
    if (rc.restarts <= 0 || rc.steps <= 0 || rc.witness_cap <= 0) throw InputError("budgets must be positive");
}

PKahlerOptions options(const RunConfig& rc) {
    PKahlerOptions o;
    o.search.restarts = rc.restarts;
    o.search.steps = rc.steps;
    o.search.seed = rc.seed;
    o.search.threads = rc.threads;
    o.witness_cap = rc.witness_cap;
    return o;
}

ComplexStructure load_structure(const RunConfig& rc) {
    if (rc.catalog.empty() == rc.in.empty()) throw InputError("give exactly one of --in and --catalog");
    if (!rc.catalog.empty()) return named_example(rc.catalog);
    json j = read_json(rc.in);
    if (j.contains("structure")) return structure_from_json(j.at("structure"));
    return structure_from_json(j);
}

ComplexForm read_literal(int n, const std::string& text, const char* what) {
    try {
        return parse_form(n, text);
    } catch (const ParseError& e) {
        throw InputError(std::string(what) + ": " + e.what() + "\n  " + text + "\n  " + std::string(e.column(), ' ') + "^");
    }
}

int require_p(const RunConfig& rc, const ComplexStructure& cs) {
    if (rc.p < 1 || rc.p >= cs.n()) throw InputError("--p must satisfy 1 <= p < n = " + std::to_string(cs.n()));
    return rc.p;
}

void emit(const RunConfig& rc, const json& j, const std::string& text) {
    if (rc.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

std::string equations_text(const ComplexStructure& cs) {
    std::ostringstream out;
    for (int j = 0; j < cs.n(); ++j) out << "  d a" << j + 1 << " = " << format_form(cs.dalpha(j)) << "\n";
    return out.str();
}

// a form to reduce: the given literal, or a fresh p-Kahler form
ComplexForm form_for(const RunConfig& rc, const ComplexStructure& cs, int p) {
    if (!rc.form.empty()) {
        ComplexForm omega = read_literal(cs.n(), rc.form, "--form");
        require_real_pp(omega, p);
        return omega;
    }
    auto r = find_pkahler(cs, p, options(rc));
    if (r.verdict != PKVerdict::FOUND) throw InputError("no " + std::to_string(p) + "-Kahler form found; pass --form");
    return *r.form;
}

int cmd_validate(const RunConfig& rc) {
    auto cs = load_structure(rc);
    auto ic = check_integrability(cs.algebra(), cs.J());
    json j{{"command", "validate"}, {"structure", structure_to_json(cs)}, {"jacobi", true}, {"integrable", ic.integrable}};
    std::ostringstream t;
    t << "valid: real dimension " << cs.algebra().dim() << ", Jacobi holds, J integrable\n" << equations_text(cs);
    emit(rc, j, t.str());
    return kDefinitive;
}

int cmd_classify(const RunConfig& rc) {
    auto cs = load_structure(rc);
    json j = classify_report(cs);
    std::ostringstream t;
    if (j["nilpotent"].get<bool>()) {
        t << j["classification"].get<std::string>() << ", a1 dim " << j["a1_dim"].get<int>() << "\n";
        if (j.contains("t")) t << "closed (1,0)-forms in the adapted basis: t = " << j["t"].get<int>() << "\n";
    } else {
        t << "not nilpotent\n";
    }
    t << "unimodular: " << (j["unimodular"].get<bool>() ? "yes" : "no") << "\n";
    emit(rc, j, t.str());
    return kDefinitive;
}

int cmd_find(const RunConfig& rc) {
    auto cs = load_structure(rc);
    int p = require_p(rc, cs);
    auto r = find_pkahler(cs, p, options(rc));
    std::ostringstream t;
    t << "verdict: " << to_string(r.verdict) << "\n";
    t << "closed real (" << p << "," << p << ")-forms: dimension " << r.closed_basis.size() << "\n";
    if (r.form) t << "form: " << format_form(*r.form) << "\n";
    if (r.form_verdict) t << "certificate: " << r.form_verdict->method << "\n";
    if (r.refutation) t << "certificate: " << r.refutation->witnesses.size() << " simple witnesses\n";
    if (!r.note.empty()) t << "note: " << r.note << "\n";
    emit(rc, find_report(cs, r), t.str());
    return r.verdict == PKVerdict::INCONCLUSIVE ? kInconclusive : kDefinitive;
}

int cmd_obstruct(const RunConfig& rc) {
    auto cs = load_structure(rc);
    int p = require_p(rc, cs);
    std::optional<ObstructionCertificate> cert;
    std::optional<ComplexForm> beta;
    if (!rc.beta.empty()) {
        beta = read_literal(cs.n(), rc.beta, "--beta");
    } else if (auto known = snn8_from_name(rc.catalog); known && p == 2) {
        auto t = known->second;
        if (known->first == 1 && t.size() == 5) t.pop_back();
        beta = snn8_obstruction_beta(known->first, t);
    }
    if (beta) {
        try {
            cert = obstruction_check(cs, p, *beta);
        } catch (const ObstructionRejected& e) {
            emit(rc, json{{"command", "obstruct"}, {"verdict", "REJECTED"}, {"reason", e.what()}},
                 std::string("rejected: ") + e.what() + "\n");
            return kInconclusive;
        }
    } else {
        cert = obstruction_search(cs, p);
    }
    if (!cert) {
        emit(rc, json{{"command", "obstruct"}, {"verdict", "INCONCLUSIVE"}}, "no obstruction found\n");
        return kInconclusive;
    }
    std::ostringstream t;
    t << "obstruction to " << p << "-Kahler forms\n";
    t << "beta: " << format_form(cert->beta) << "\n";
    t << "certificate: d beta = " << format_form(cert->d_beta) << "\n";
    for (const auto& term : cert->decomposition)
        t << "  " << to_string(term.c) << " * psi ^ conj(psi), psi = " << format_form(term.psi) << "\n";
    emit(rc, obstruction_report(cs, *cert), t.str());
    return kDefinitive;
}

int cmd_restrict(const RunConfig& rc) {
    auto cs = load_structure(rc);
    int p = require_p(rc, cs);
    ComplexForm omega = form_for(rc, cs, p);
    ComplexForm closed(2 * cs.n());
    if (!rc.closed.empty()) {
        closed = read_literal(cs.n(), rc.closed, "--closed");
    } else {
        std::vector<ComplexForm> images;
        for (int j = 0; j < cs.n(); ++j) images.push_back(cs.dalpha(j));
        auto ker = kernel(coefficient_matrix(images));
        if (ker.empty()) throw InputError("no closed (1,0)-form; the restriction does not apply");
        closed = one_form(cs.n(), ker[0]);
    }
    auto red = restrict_to_jinvariant_ideal(cs, omega, closed);
    json j = restrict_report(cs, omega, p, red);
    std::ostringstream t;
    t << "ideal of complex dimension " << red.h.n() << "\n" << equations_text(red.h);
    t << "restricted form: " << format_form(red.omega) << "\n";
    t << "closed: " << (j["restricted_closed"].get<bool>() ? "yes" : "no")
      << ", transversality: " << j["restricted_verdict"]["status"].get<std::string>() << "\n";
    emit(rc, j, t.str());
    return j["restricted_verdict"]["status"] == "INCONCLUSIVE" ? kInconclusive : kDefinitive;
}

int cmd_quotient(const RunConfig& rc) {
    auto cs = load_structure(rc);
    int p = require_p(rc, cs);
    if (p < 2) throw InputError("the quotient needs p >= 2");
    ComplexForm omega = form_for(rc, cs, p);
    auto q = b_extension_quotient(cs, omega);
    json j = quotient_report(cs, omega, p, q);
    std::ostringstream t;
    t << "quotient of complex dimension " << q.k.n() << "\n" << equations_text(q.k);
    t << "extracted (" << p - 1 << "," << p - 1 << ")-form: " << format_form(q.omega) << "\n";
    t << "closed: " << (j["extracted_closed"].get<bool>() ? "yes" : "no")
      << ", transversality: " << j["extracted_verdict"]["status"].get<std::string>() << "\n";
    emit(rc, j, t.str());
    return j["extracted_verdict"]["status"] == "INCONCLUSIVE" ? kInconclusive : kDefinitive;
}

int cmd_aab(const RunConfig& rc) {
    if (rc.in.empty()) throw InputError("aab-kahler needs --in with {n, lambda, v, A}");
    AlmostAbelianData d = almost_abelian_from_json(read_json(rc.in));
    auto k = kahler_decision_almost_abelian(d);
    std::ostringstream t;
    t << "kahler: " << (k.kahler ? "true" : "false") << "\nreason: " << k.reason << "\n";
    if (k.omega) t << "form: " << format_form(*k.omega) << "\n";
    emit(rc, aab_report(d, k), t.str());
    return kDefinitive;
}

int cmd_verify(const RunConfig& rc) {
    auto v = verify_json_report(read_json(rc.report));
    std::cout << (v.ok ? "OK: " : "FAILED: ") << v.message << "\n";
    return v.ok ? kDefinitive : kInputError;
}

int cmd_catalog(const RunConfig& rc) {
    if (!rc.export_name.empty()) {
        auto cs = named_example(rc.export_name);
        json j = structure_to_json(cs);
        std::cout << j.dump(2) << "\n";
        return kDefinitive;
    }
    json list = json::array();
    std::ostringstream t;
    for (const auto& e : catalog_list()) {
        list.push_back({{"name", e.name}, {"description", e.description}});
        t << e.name << "  " << e.description << "\n";
    }
    emit(rc, list, t.str());
    return kDefinitive;
}

void add_common(CLI::App* sub, RunConfig& rc, bool needs_p) {
    sub->add_option("--in", rc.in, "input JSON file");
    sub->add_option("--catalog", rc.catalog, "catalog entry name");
    sub->add_option("--format", rc.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--config", rc.config, "JSON config with pkl.search.* keys");
    if (!needs_p) return;
    sub->add_option("--p", rc.p, "bidegree p")->required();
    sub->add_option("--budget-restarts", rc.restarts, "search restarts");
    sub->add_option("--budget-steps", rc.steps, "gradient steps per restart");
    sub->add_option("--witness-cap", rc.witness_cap, "rounds of witness harvesting");
    sub->add_option("--seed", rc.seed, "search seed");
    sub->add_option("--threads", rc.threads, "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-Kahler structures on Lie algebras with complex structure"};
    app.require_subcommand(1);
    RunConfig rc;

    auto* validate = app.add_subcommand("validate", "check Jacobi and integrability");
    add_common(validate, rc, false);
    auto* classify = app.add_subcommand("classify", "ascending series and invariants");
    add_common(classify, rc, false);
    auto* find = app.add_subcommand("find", "search for a p-Kahler form or refute one");
    add_common(find, rc, true);
    auto* obstruct = app.add_subcommand("obstruct", "check or search an exact obstruction");
    add_common(obstruct, rc, true);
    obstruct->add_option("--beta", rc.beta, "(2n-2p-1)-form literal");
    auto* restrict_cmd = app.add_subcommand("restrict", "restrict a p-Kahler form to a J-invariant ideal");
    add_common(restrict_cmd, rc, true);
    restrict_cmd->add_option("--form", rc.form, "p-Kahler form literal");
    restrict_cmd->add_option("--closed", rc.closed, "closed (1,0)-form literal");
    auto* quotient = app.add_subcommand("quotient", "extract the (p-1)-form on the b-extension quotient");
    add_common(quotient, rc, true);
    quotient->add_option("--form", rc.form, "p-Kahler form literal");
    auto* aab = app.add_subcommand("aab-kahler", "Kahler decision for almost abelian data");
    add_common(aab, rc, false);
    auto* verify = app.add_subcommand("verify", "re-check a JSON report exactly");
    verify->add_option("report", rc.report, "report file")->required();
    auto* catalog = app.add_subcommand("catalog", "list or export catalog entries");
    catalog->add_option("--export", rc.export_name, "print the structure JSON of an entry");
    catalog->add_option("--format", rc.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        for (auto* sub : app.get_subcommands()) apply_config(rc, *sub);
        if (*validate) return cmd_validate(rc);
        if (*classify) return cmd_classify(rc);
        if (*find) return cmd_find(rc);
        if (*obstruct) return cmd_obstruct(rc);
        if (*restrict_cmd) return cmd_restrict(rc);
        if (*quotient) return cmd_quotient(rc);
        if (*aab) return cmd_aab(rc);
        if (*verify) return cmd_verify(rc);
        if (*catalog) return cmd_catalog(rc);
    } catch (const ParseError& e) {
        std::cerr << "error: column " << e.column() + 1 << ": " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
