#include "pkl/pkahler.hpp"

#include <map>
#include <random>

namespace pkl {

namespace {

struct RealSlot {
    Mask i, j;
    int kind;  // 0: mu(I,I), 1: mu(I,J) + mu(J,I), 2: i(mu(I,J) - mu(J,I))
};

std::vector<RealSlot> real_slots(int n, int p) {
    auto subs = subsets(n, p);
    std::vector<RealSlot> out;
    for (std::size_t a = 0; a < subs.size(); ++a)
        for (std::size_t b = a; b < subs.size(); ++b) {
            if (a == b) {
                out.push_back({subs[a], subs[b], 0});
            } else {
                out.push_back({subs[a], subs[b], 1});
                out.push_back({subs[a], subs[b], 2});
            }
        }
    return out;
}

ComplexForm mu(int n, int p, Mask i, Mask j) {
    return ComplexForm::monomial(2 * n, make_mask(n, i, j), i_power(static_cast<long>(p) * p));
}

ComplexForm slot_form(int n, int p, const RealSlot& s) {
    if (s.kind == 0) return mu(n, p, s.i, s.j);
    ComplexForm a = mu(n, p, s.i, s.j), b = mu(n, p, s.j, s.i);
    if (s.kind == 1) return a + b;
    return Scalar::i() * (a - b);
}

ComplexForm combine(const std::vector<ComplexForm>& basis, const std::vector<Rational>& y, int rank) {
    ComplexForm out(rank);
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (y[k] != 0) out += Scalar(y[k]) * basis[k];
    return out;
}

Rational real_value(const Scalar& s) {
    if (!s.is_real()) throw std::logic_error("volume coefficient of a real form is not real");
    return s.re;
}

// Rows (mask, re/im) of the real-linear map y -> forms(y).
RationalMatrix real_coefficient_matrix(const std::vector<ComplexForm>& images) {
    std::map<Mask, std::size_t> rows;
    for (const auto& f : images)
        for (const auto& [m, c] : f.terms()) rows.emplace(m, 0);
    std::size_t r = 0;
    for (auto& [m, idx] : rows) idx = r++;
    RationalMatrix out(2 * rows.size(), images.size());
    for (std::size_t k = 0; k < images.size(); ++k)
        for (const auto& [m, c] : images[k].terms()) {
            out(2 * rows[m], k) = c.re;
            out(2 * rows[m] + 1, k) = c.im;
        }
    return out;
}

RationalMatrix witness_matrix(const std::vector<ComplexForm>& basis, const std::vector<ComplexForm>& psis) {
    // columns indexed by witnesses, rows by basis forms, plus a final row of ones
    RationalMatrix a(basis.size() + 1, psis.size());
    for (std::size_t w = 0; w < psis.size(); ++w) {
        for (std::size_t j = 0; j < basis.size(); ++j) a(j, w) = real_value(volume_coefficient(basis[j], psis[w]));
        a(basis.size(), w) = 1;
    }
    return a;
}

bool same_ray(const std::vector<ObstructionTerm>& terms) {
    const Scalar* ref = nullptr;
    for (const auto& t : terms) {
        if (t.c.is_zero()) return false;
        if (!ref) {
            ref = &t.c;
            continue;
        }
        Scalar ratio = t.c / *ref;
        if (!ratio.is_real() || ratio.re <= 0) return false;
    }
    return ref != nullptr;
}

}  // namespace

std::vector<ComplexForm> real_pp_basis(int n, int p) {
    std::vector<ComplexForm> out;
    for (const auto& s : real_slots(n, p)) out.push_back(slot_form(n, p, s));
    return out;
}

ClosedCone closed_pp_space(const ComplexStructure& cs, int p) {
    const int n = cs.n();
    auto basis = real_pp_basis(n, p);
    std::vector<ComplexForm> images;
    for (const auto& f : basis) images.push_back(cs.d(f));
    RationalMatrix m = real_coefficient_matrix(images);
    ClosedCone cone;
    if (m.rows() == 0) {
        for (std::size_t k = 0; k < basis.size(); ++k) {
            RationalVector e(basis.size());
            e[k] = 1;
            cone.coordinates.push_back(std::move(e));
        }
    } else {
        cone.coordinates = kernel(m);
    }
    for (const auto& y : cone.coordinates) cone.basis.push_back(combine(basis, y, 2 * n));
    return cone;
}

std::string to_string(PKVerdict v) {
    switch (v) {
    case PKVerdict::FOUND: return "FOUND";
    case PKVerdict::REFUTED: return "REFUTED";
    case PKVerdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

PKahlerReport find_pkahler(const ComplexStructure& cs, int p, const PKahlerOptions& options) {
    const int n = cs.n();
    if (p < 1 || p >= n) throw std::invalid_argument("p must satisfy 1 <= p < n");
    PKahlerReport report;
    report.p = p;
    ClosedCone cone = closed_pp_space(cs, p);
    report.closed_basis = cone.basis;
    if (cone.basis.empty()) {
        report.verdict = PKVerdict::REFUTED;
        report.empty_cone = true;
        report.note = "no non-zero closed real (p,p)-form";
        return report;
    }
    const std::size_t dim = cone.basis.size();

    auto found = [&](const std::vector<Rational>& y, const std::string& how) {
        ComplexForm omega = combine(cone.basis, y, 2 * n);
        auto verdict = check_transverse(omega, p, options.search);
        if (verdict.status != Transversality::TRANSVERSE) return false;
        report.verdict = PKVerdict::FOUND;
        report.form = omega;
        report.form_verdict = verdict;
        report.note = how;
        return true;
    };

    std::vector<ComplexMatrix> grams;
    for (const auto& b : cone.basis) grams.push_back(gram_matrix(b, p));

    // seeds: projection of omega^p/p! onto the closed space, then sparse rational combinations
    std::vector<std::vector<Rational>> seeds;
    {
        auto slots = real_slots(n, p);
        RationalVector target(slots.size());
        for (std::size_t k = 0; k < slots.size(); ++k) target[k] = slots[k].kind == 0 ? 1 : 0;
        RationalMatrix kc = RationalMatrix::from_columns(cone.coordinates, slots.size());
        auto normal = kc.transpose() * kc;
        if (auto y = solve(normal, kc.transpose() * target)) seeds.push_back(*y);
        std::mt19937_64 rng(options.search.seed + 17);
        std::uniform_int_distribution<int> coin(-2, 2);
        for (int s = 0; s < 8; ++s) {
            std::vector<Rational> y(dim);
            for (auto& v : y) v = coin(rng);
            seeds.push_back(std::move(y));
        }
    }
    if (auto y = find_positive_combination(grams, seeds, options.search))
        if (found(*y, "positive-definite Gram matrix")) return report;

    // witness-family refutation with harvested counterexamples
    std::vector<ComplexMatrix> witnesses;
    std::vector<ComplexForm> psis;
    for (Mask k : subsets(n, n - p)) {
        ComplexMatrix cols(n, n - p);
        int c = 0;
        for (Mask r = k; r; r &= r - 1) cols(std::countr_zero(r), c++) = Scalar(1);
        witnesses.push_back(cols);
        psis.push_back(wedge_columns(cols));
    }
    for (int round = 0; round < options.witness_cap; ++round) {
        report.rounds = round + 1;
        report.witness_count = witnesses.size();
        RationalMatrix a = witness_matrix(cone.basis, psis);
        RationalVector b(dim + 1);
        b[dim] = 1;
        auto lp = nonnegative_solution(a, b);
        if (lp.feasible) {
            report.verdict = PKVerdict::REFUTED;
            report.refutation = WitnessRefutation{witnesses, lp.x};
            report.note = "witness family is infeasible";
            return report;
        }
        // Farkas alternative: A^T w + t >= 0 with t < 0, so every witness is positive on w
        std::vector<Rational> w(lp.farkas.begin(), lp.farkas.begin() + dim);
        ComplexForm candidate = combine(cone.basis, w, 2 * n);
        if (is_positive_definite(gram_matrix(candidate, p)) && found(w, "witness LP candidate")) return report;
        auto verdict = check_transverse(candidate, p, options.search);
        if (verdict.status == Transversality::TRANSVERSE) {
            if (found(w, "witness LP candidate")) return report;
        }
        if (verdict.status != Transversality::NOT_TRANSVERSE) {
            report.note = "candidate could not be decided";
            break;
        }
        witnesses.push_back(verdict.witness->columns);
        psis.push_back(wedge_columns(verdict.witness->columns));
    }
    report.verdict = PKVerdict::INCONCLUSIVE;
    if (report.note.empty()) report.note = "witness budget exhausted";
    report.witness_count = witnesses.size();
    return report;
}

bool verify_report(const ComplexStructure& cs, const PKahlerReport& report) {
    const int p = report.p;
    switch (report.verdict) {
    case PKVerdict::FOUND: {
        if (!report.form || !report.form_verdict) return false;
        const ComplexForm& omega = *report.form;
        try {
            require_real_pp(omega, p);
        } catch (const std::invalid_argument&) {
            return false;
        }
        if (!cs.d(omega).is_zero()) return false;
        return report.form_verdict->status == Transversality::TRANSVERSE &&
               verify_verdict(omega, p, *report.form_verdict);
    }
    case PKVerdict::REFUTED: {
        ClosedCone cone = closed_pp_space(cs, p);
        if (report.empty_cone) return cone.basis.empty();
        if (!report.refutation || cone.basis != report.closed_basis) return false;
        const auto& ref = *report.refutation;
        if (ref.witnesses.size() != ref.multipliers.size() || ref.witnesses.empty()) return false;
        std::vector<ComplexForm> psis;
        for (const auto& cols : ref.witnesses) {
            if (static_cast<int>(cols.rows()) != cs.n() || static_cast<int>(cols.cols()) != cs.n() - p) return false;
            psis.push_back(wedge_columns(cols));
            if (psis.back().is_zero()) return false;
        }
        RationalMatrix a = witness_matrix(cone.basis, psis);
        RationalVector b(cone.basis.size() + 1);
        b.back() = 1;
        FeasibilityResult fr;
        fr.feasible = true;
        fr.x = ref.multipliers;
        return verify_feasibility(a, b, fr);
    }
    case PKVerdict::INCONCLUSIVE: return true;
    }
    return false;
}

ObstructionCertificate obstruction_check(const ComplexStructure& cs, int p, const ComplexForm& beta,
                                         const std::optional<std::vector<ObstructionTerm>>& decomposition) {
    const int n = cs.n();
    const int q = n - p;
    if (beta.rank() != 2 * n) throw DimensionMismatch("beta lives on a different coframe");
    for (const auto& [m, c] : beta.terms())
        if (popcount(m) != 2 * q - 1)
            throw ObstructionRejected("beta must have degree " + std::to_string(2 * q - 1));
    if (!algebra_invariants(cs.algebra()).is_unimodular)
        throw ObstructionRejected("the algebra is not unimodular, so exact top forms need not vanish");
    ObstructionCertificate cert;
    cert.p = p;
    cert.beta = beta;
    cert.d_beta = cs.d(beta);
    cert.d_beta_component = bidegree_component(cert.d_beta, q, q);
    const ComplexForm& dc = cert.d_beta_component;
    if (dc.is_zero()) throw ObstructionRejected("the (n-p,n-p) component of d beta is zero");

    if (decomposition) {
        cert.decomposition = *decomposition;
    } else {
        bool diagonal = true;
        for (const auto& [m, c] : dc.terms())
            if (holo_part(m, n) != anti_part(m, n)) diagonal = false;
        if (diagonal) {
            for (const auto& [m, c] : dc.terms())
                cert.decomposition.push_back({c, ComplexForm::monomial(2 * n, holo_part(m, n))});
        } else {
            auto subs = subsets(n, q);
            std::map<Mask, std::size_t> idx;
            for (std::size_t k = 0; k < subs.size(); ++k) idx[subs[k]] = k;
            ComplexMatrix mat(subs.size(), subs.size());
            for (const auto& [m, c] : dc.terms()) mat(idx[holo_part(m, n)], idx[anti_part(m, n)]) = c;
            Scalar phase;
            for (std::size_t k = 0; k < subs.size() && phase.is_zero(); ++k) phase = mat(k, k);
            if (phase.is_zero()) throw ObstructionRejected("no diagonal entry to normalise; supply a decomposition");
            ComplexMatrix h(subs.size(), subs.size());
            for (std::size_t r = 0; r < subs.size(); ++r)
                for (std::size_t c = 0; c < subs.size(); ++c) h(r, c) = mat(r, c) / phase;
            if (!(h == h.adjoint())) throw ObstructionRejected("d beta component is not Hermitian up to a phase");
            // LDL* with the pivots in the given order
            const std::size_t m = subs.size();
            ComplexMatrix l = ComplexMatrix::identity(m);
            std::vector<Scalar> d(m);
            for (std::size_t k = 0; k < m; ++k) {
                Scalar dk = h(k, k);
                for (std::size_t j = 0; j < k; ++j) dk -= Scalar(l(k, j).norm2()) * d[j];
                d[k] = dk;
                for (std::size_t i = k + 1; i < m; ++i) {
                    Scalar s = h(i, k);
                    for (std::size_t j = 0; j < k; ++j) s -= l(i, j) * l(k, j).conj() * d[j];
                    if (dk.is_zero()) {
                        if (!s.is_zero()) throw ObstructionRejected("zero pivot; supply a decomposition");
                        continue;
                    }
                    l(i, k) = s / dk;
                }
            }
            for (std::size_t k = 0; k < m; ++k) {
                if (d[k].is_zero()) continue;
                cert.decomposition.push_back({phase * d[k], holomorphic_form(n, q, l.column(k))});
            }
        }
    }
    if (!verify_obstruction(cs, cert))
        throw ObstructionRejected("decomposition is not a same-sign sum of simple terms");
    return cert;
}

bool verify_obstruction(const ComplexStructure& cs, const ObstructionCertificate& cert) {
    const int n = cs.n();
    const int q = n - cert.p;
    if (!algebra_invariants(cs.algebra()).is_unimodular) return false;
    for (const auto& [m, c] : cert.beta.terms())
        if (popcount(m) != 2 * q - 1) return false;
    ComplexForm d = cs.d(cert.beta);
    if (!(d == cert.d_beta)) return false;
    ComplexForm comp = bidegree_component(d, q, q);
    if (!(comp == cert.d_beta_component) || comp.is_zero()) return false;
    if (!same_ray(cert.decomposition)) return false;
    ComplexForm sum(2 * n);
    for (const auto& t : cert.decomposition) {
        if (t.psi.is_zero() || t.psi.degree() != q || !factor_simple(t.psi)) return false;
        sum += t.c * wedge(t.psi, conjugate(t.psi));
    }
    return sum == comp;
}

std::optional<ObstructionCertificate> obstruction_search(const ComplexStructure& cs, int p) {
    const int n = cs.n();
    const int q = n - p;
    if (q < 1 || !algebra_invariants(cs.algebra()).is_unimodular) return std::nullopt;
    // real unknowns: (re, im) of every monomial of degree 2q - 1
    std::vector<Mask> monos;
    for (Mask m : subsets(2 * n, 2 * q - 1)) monos.push_back(m);
    std::vector<ComplexForm> images;  // (q,q) part of d of each real unknown
    for (Mask m : monos) {
        ComplexForm dm = bidegree_component(cs.d(ComplexForm::monomial(2 * n, m)), q, q);
        images.push_back(dm);
        images.push_back(Scalar::i() * dm);
    }
    // conditions: off-diagonal coefficients vanish, diagonal ones lie on the
    // ray of i^{q^2}; value s_K = Re(i^{-q^2} coefficient of alpha^{K,Kbar})
    const Scalar unphase = Scalar(1) / i_power(static_cast<long>(q) * q);
    auto subs = subsets(n, q);
    std::map<Mask, std::size_t> diag_index;
    for (std::size_t k = 0; k < subs.size(); ++k) diag_index[make_mask(n, subs[k], subs[k])] = k;
    std::map<Mask, std::size_t> off_rows;
    for (const auto& f : images)
        for (const auto& [m, c] : f.terms())
            if (!diag_index.count(m)) off_rows.emplace(m, 0);
    std::size_t r = 0;
    for (auto& [m, idx] : off_rows) idx = r++;
    const std::size_t nvar = images.size();
    RationalMatrix cond(2 * off_rows.size() + subs.size(), nvar);
    RationalMatrix values(subs.size(), nvar);
    for (std::size_t v = 0; v < nvar; ++v)
        for (const auto& [m, c] : images[v].terms()) {
            auto it = diag_index.find(m);
            if (it == diag_index.end()) {
                cond(2 * off_rows[m], v) = c.re;
                cond(2 * off_rows[m] + 1, v) = c.im;
            } else {
                Scalar u = c * unphase;
                cond(2 * off_rows.size() + it->second, v) = u.im;
                values(it->second, v) = u.re;
            }
        }
    auto ker = kernel(cond);
    if (ker.empty()) return std::nullopt;
    RationalMatrix kmat = RationalMatrix::from_columns(ker, nvar);
    RationalMatrix g = values * kmat;  // diag values in kernel coordinates
    // s >= 0, sum s = 1, s in the column space of g
    auto annihil = kernel(g.transpose());
    RationalMatrix lp(annihil.size() + 1, subs.size());
    for (std::size_t a = 0; a < annihil.size(); ++a)
        for (std::size_t k = 0; k < subs.size(); ++k) lp(a, k) = annihil[a][k];
    for (std::size_t k = 0; k < subs.size(); ++k) lp(annihil.size(), k) = 1;
    RationalVector rhs(annihil.size() + 1);
    rhs.back() = 1;
    auto res = nonnegative_solution(lp, rhs);
    if (!res.feasible) return std::nullopt;
    auto y = solve(g, res.x);
    if (!y) throw std::logic_error("target lies outside the column space");
    RationalVector coords = kmat * *y;
    ComplexForm beta(2 * n);
    for (std::size_t k = 0; k < monos.size(); ++k)
        beta.add_term(monos[k], Scalar(coords[2 * k], coords[2 * k + 1]));
    try {
        return obstruction_check(cs, p, beta);
    } catch (const ObstructionRejected&) {
        return std::nullopt;
    }
}

StnilpResult stnilp_degree(const ComplexStructure& cs) {
    auto nb = nilpotent_basis(cs);
    StnilpResult out;
    out.t = nb.closed;
    if (out.t < cs.n()) out.forbidden_p = cs.n() - out.t;
    out.basis = nb.t;
    return out;
}

}  // namespace pkl
