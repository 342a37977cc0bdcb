#include "pkl/positivity.hpp"

#include "pkl/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace pkl {

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

Mask full_holo(int n) { return (Mask(1) << n) - 1; }

Scalar volume_scale(int n) {
    // vol = i^n (-1)^{n(n-1)/2} alpha^{1..n, 1bar..nbar}
    Scalar s = i_power(n);
    return (n * (n - 1) / 2) % 2 ? -s : s;
}

std::map<Mask, std::size_t> subset_index(int n, int q) {
    std::map<Mask, std::size_t> idx;
    auto subs = subsets(n, q);
    for (std::size_t k = 0; k < subs.size(); ++k) idx[subs[k]] = k;
    return idx;
}

CMat to_eigen(const ComplexMatrix& h) {
    CMat m(h.rows(), h.cols());
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) m(i, j) = h(i, j).to_complex();
    return m;
}

Scalar rationalize_complex(std::complex<double> z, std::int64_t max_den) {
    return Scalar(rationalize(z.real(), max_den), rationalize(z.imag(), max_den));
}

template <class T>
BasicForm<T> divided_power_t(const BasicForm<T>& f, int k) {
    BasicForm<T> out = BasicForm<T>::monomial(f.rank(), 0, T(1));
    for (int j = 1; j <= k; ++j) {
        out = wedge(out, f);
        out *= T(1.0 / j);
    }
    return out;
}

// Grassmannian search: psi = wedge of the columns of M (n x q), objective
// vol_coeff(psi) / |x|^2 with x the Pluecker coordinates (q x q minors).
class ColumnSearch {
public:
    ColumnSearch(const ComplexMatrix& gram, int n, int q)
        : g_(to_eigen(gram)), n_(n), q_(q) {
        for (Mask m : subsets(n, q)) {
            std::vector<int> rows;
            for (Mask r = m; r; r &= r - 1) rows.push_back(std::countr_zero(r));
            rows_.push_back(std::move(rows));
        }
    }

    double value(const CMat& m, CVec* grad_x = nullptr) const {
        CVec x = pluecker(m);
        double nx = x.squaredNorm();
        if (nx < 1e-300) return std::numeric_limits<double>::infinity();
        double f = (x.adjoint() * g_ * x)(0, 0).real() / nx;
        if (grad_x) *grad_x = (g_ * x - f * x) / nx;
        return f;
    }

    // d f / d conj(M)
    CMat gradient(const CMat& m, const CVec& r) const {
        CMat out = CMat::Zero(n_, q_);
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            if (std::abs(r(k)) == 0.0) continue;
            const auto& rows = rows_[k];
            for (int pos = 0; pos < q_; ++pos)
                for (int b = 0; b < q_; ++b) {
                    std::complex<double> cof = cofactor(m, rows, pos, b);
                    out(rows[pos], b) += std::conj(cof) * r(k);
                }
        }
        return out;
    }

    CVec pluecker(const CMat& m) const {
        CVec x(rows_.size());
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            CMat sub(q_, q_);
            for (int a = 0; a < q_; ++a) sub.row(a) = m.row(rows_[k][a]);
            x(k) = sub.determinant();
        }
        return x;
    }

    // Reduced column echelon form with respect to the best-conditioned minor.
    CMat normalise(const CMat& m) const {
        CVec x = pluecker(m);
        Eigen::Index best = 0;
        x.cwiseAbs().maxCoeff(&best);
        CMat sub(q_, q_);
        for (int a = 0; a < q_; ++a) sub.row(a) = m.row(rows_[best][a]);
        return m * sub.inverse();
    }

    struct Result {
        double value = std::numeric_limits<double>::infinity();
        CMat m;
    };

    Result run(std::mt19937_64& rng, int steps, double tol) const {
        std::normal_distribution<double> nd;
        CMat m(n_, q_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < q_; ++j) m(i, j) = {nd(rng), nd(rng)};
        m = Eigen::HouseholderQR<CMat>(m).householderQ() * CMat::Identity(n_, q_);
        CVec r;
        double f = value(m, &r);
        double eta = 1.0;
        for (int s = 0; s < steps; ++s) {
            CMat grad = gradient(m, r);
            double gn = grad.squaredNorm();
            if (gn < tol * tol) break;
            eta *= 2.0;
            CMat trial;
            double ft = f;
            CVec rt;
            while (eta > 1e-16) {
                trial = m - eta * grad;
                trial = Eigen::HouseholderQR<CMat>(trial).householderQ() * CMat::Identity(n_, q_);
                ft = value(trial, &rt);
                if (ft <= f - 1e-4 * eta * gn) break;
                eta *= 0.5;
            }
            if (eta <= 1e-16) break;
            bool small = f - ft < tol;
            m = trial;
            f = ft;
            r = rt;
            if (small) break;
        }
        return {f, m};
    }

private:
    std::complex<double> cofactor(const CMat& m, const std::vector<int>& rows, int pos, int col) const {
        if (q_ == 1) return 1.0;
        CMat sub(q_ - 1, q_ - 1);
        int ri = 0;
        for (int a = 0; a < q_; ++a) {
            if (a == pos) continue;
            int ci = 0;
            for (int b = 0; b < q_; ++b) {
                if (b == col) continue;
                sub(ri, ci++) = m(rows[a], b);
            }
            ++ri;
        }
        double sign = ((pos + col) % 2) ? -1.0 : 1.0;
        return sign * sub.determinant();
    }

    CMat g_;
    int n_, q_;
    std::vector<std::vector<int>> rows_;
};

std::optional<SimpleFormWitness> exact_witness(const ComplexForm& omega, const ComplexMatrix& columns) {
    ComplexForm psi = wedge_columns(columns);
    if (psi.is_zero()) return std::nullopt;
    Scalar v = volume_coefficient(omega, psi);
    if (v.re > 0) return std::nullopt;
    return SimpleFormWitness{columns, v};
}

std::optional<SimpleFormWitness> rationalize_witness(const ComplexForm& omega, const Eigen::MatrixXcd& m) {
    for (std::int64_t den : {1, 2, 10, 100, 1000, 10000, 1000000}) {
        ComplexMatrix cols(m.rows(), m.cols());
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) cols(i, j) = rationalize_complex(m(i, j), den);
        if (auto w = exact_witness(omega, cols)) return w;
    }
    return std::nullopt;
}

}  // namespace

ComplexForm reference_volume(int n) {
    ComplexForm v = ComplexForm::monomial(2 * n, 0);
    for (int j = 0; j < n; ++j)
        v = wedge(v, ComplexForm::monomial(2 * n, make_mask(n, Mask(1) << j, Mask(1) << j), Scalar::i()));
    return v;
}

void require_real_pp(const ComplexForm& f, int p) {
    const int n = coframe_dim(f);
    for (const auto& [m, c] : f.terms())
        if (popcount(holo_part(m, n)) != p || popcount(anti_part(m, n)) != p)
            throw std::invalid_argument("form is not of bidegree (" + std::to_string(p) + "," + std::to_string(p) + ")");
    if (!is_real(f)) throw std::invalid_argument("form is not real");
}

int pp_degree(const ComplexForm& f) {
    if (f.is_zero()) throw std::invalid_argument("zero form has no bidegree");
    const int n = coframe_dim(f);
    Mask m = f.terms().begin()->first;
    int p = popcount(holo_part(m, n));
    require_real_pp(f, p);
    return p;
}

Scalar volume_coefficient(const ComplexForm& omega, const ComplexForm& psi) {
    omega.check_rank(psi);
    const int n = coframe_dim(omega);
    if (psi.is_zero() || omega.is_zero()) return Scalar(0);
    const int q = psi.degree();
    for (const auto& [m, c] : psi.terms())
        if (anti_part(m, n) || popcount(m) != q) throw std::invalid_argument("psi must be a (q,0)-form");
    ComplexForm top = wedge(wedge(omega, psi), conjugate(psi));
    Scalar c(0);
    const Mask full = make_mask(n, full_holo(n), full_holo(n));
    for (const auto& [m, coeff] : top.terms()) {
        if (m != full) throw std::invalid_argument("degrees of omega and psi are not complementary");
        c = coeff;
    }
    return i_power(static_cast<long>(q) * q) * c / volume_scale(n);
}

ComplexMatrix gram_matrix(const ComplexForm& omega, int p) {
    require_real_pp(omega, p);
    const int n = coframe_dim(omega);
    const int q = n - p;
    auto idx = subset_index(n, q);
    ComplexMatrix h(idx.size(), idx.size());
    const Mask full = make_mask(n, full_holo(n), full_holo(n));
    const Scalar scale = i_power(static_cast<long>(q) * q) / volume_scale(n);
    for (const auto& [m, c] : omega.terms()) {
        Mask hol = holo_part(m, n), anti = anti_part(m, n);
        Mask l = full_holo(n) & ~hol, k = full_holo(n) & ~anti;
        // Omega-term ^ alpha^L ^ conj(alpha^K)
        Mask left = m | l;
        int sign = reorder_sign(m, l) * reorder_sign(left, make_mask(n, 0, k));
        if ((left | make_mask(n, 0, k)) != full) continue;
        Scalar v = scale * c;
        h(idx.at(k), idx.at(l)) += sign < 0 ? -v : v;
    }
    return h;
}

std::vector<Rational> leading_minors(const ComplexMatrix& h) {
    std::vector<Rational> out;
    for (std::size_t k = 1; k <= h.rows(); ++k) {
        Scalar d = determinant(h.block(0, 0, k, k));
        if (!d.is_real()) throw std::invalid_argument("matrix is not Hermitian");
        out.push_back(d.re);
    }
    return out;
}

bool is_positive_definite(const ComplexMatrix& h) {
    return hermitian_pivot_witness(h).positive_definite;
}

PivotWitness hermitian_pivot_witness(const ComplexMatrix& h) {
    const std::size_t m = h.rows();
    ComplexMatrix l = ComplexMatrix::identity(m);
    std::vector<Scalar> d(m);
    PivotWitness out;
    for (std::size_t k = 0; k < m; ++k) {
        Scalar dk = h(k, k);
        for (std::size_t j = 0; j < k; ++j) dk -= Scalar(l(k, j).norm2()) * d[j];
        if (!dk.is_real()) throw std::invalid_argument("matrix is not Hermitian");
        if (dk.re <= 0) {
            out.positive_definite = false;
            out.value = dk.re;
            // x = L^{-*} e_k, supported on the first k+1 coordinates
            std::vector<Scalar> x(m);
            x[k] = Scalar(1);
            for (std::size_t i = k; i-- > 0;) {
                Scalar s(0);
                for (std::size_t j = i + 1; j <= k; ++j) s += l(j, i).conj() * x[j];
                x[i] = -s;
            }
            out.x = std::move(x);
            return out;
        }
        d[k] = dk;
        for (std::size_t i = k + 1; i < m; ++i) {
            Scalar s = h(i, k);
            for (std::size_t j = 0; j < k; ++j) s -= l(i, j) * l(k, j).conj() * d[j];
            l(i, k) = s / dk;
        }
    }
    return out;
}

ComplexForm holomorphic_form(int n, int q, const std::vector<Scalar>& x) {
    auto subs = subsets(n, q);
    ComplexForm f(2 * n);
    for (std::size_t k = 0; k < subs.size(); ++k) f.add_term(subs[k], x[k]);
    return f;
}

ComplexForm wedge_columns(const ComplexMatrix& columns) {
    const int n = static_cast<int>(columns.rows());
    ComplexForm out = ComplexForm::monomial(2 * n, 0);
    for (std::size_t j = 0; j < columns.cols(); ++j) out = wedge(out, one_form(n, columns.column(j)));
    return out;
}

std::optional<ComplexMatrix> factor_simple(const ComplexForm& psi) {
    const int n = coframe_dim(psi);
    if (psi.is_zero()) return std::nullopt;
    const int q = psi.degree();
    for (const auto& [m, c] : psi.terms())
        if (anti_part(m, n) || popcount(m) != q) return std::nullopt;
    std::vector<ComplexForm> prods;
    for (int j = 1; j <= n; ++j) prods.push_back(wedge(alpha(n, j), psi));
    auto ker = kernel(coefficient_matrix(prods));
    if (static_cast<int>(ker.size()) != q) return std::nullopt;
    if (q > 0) ker = row_space(ComplexMatrix::from_rows(ker));
    ComplexMatrix cols = q > 0 ? ComplexMatrix::from_columns(ker, n) : ComplexMatrix(n, 0);
    ComplexForm w = wedge_columns(cols);
    if (w.is_zero()) return std::nullopt;
    Mask m0 = psi.terms().begin()->first;
    Scalar ratio = psi.coefficient(m0) / w.coefficient(m0);
    if (!(ratio * w == psi)) return std::nullopt;
    if (q == 0) return std::nullopt;
    for (int i = 0; i < n; ++i) cols(i, 0) *= ratio;
    return cols;
}

std::string to_string(Transversality t) {
    switch (t) {
    case Transversality::TRANSVERSE: return "TRANSVERSE";
    case Transversality::NOT_TRANSVERSE: return "NOT_TRANSVERSE";
    case Transversality::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

TransversalityVerdict check_transverse(const ComplexForm& omega, int p, const SearchBudget& budget) {
    const int n = coframe_dim(omega);
    const int q = n - p;
    if (p < 0 || p > n) throw std::invalid_argument("p out of range");
    ComplexMatrix h = gram_matrix(omega, p);
    TransversalityVerdict v;

    auto pivot = hermitian_pivot_witness(h);
    if (pivot.positive_definite) {
        v.status = Transversality::TRANSVERSE;
        v.method = "gram";
        v.minors = leading_minors(h);
        return v;
    }
    auto subs = subsets(n, q);
    auto unit_columns = [&](Mask k) {
        ComplexMatrix cols(n, q);
        int c = 0;
        for (Mask r = k; r; r &= r - 1) cols(std::countr_zero(r), c++) = Scalar(1);
        return cols;
    };
    for (std::size_t k = 0; k < subs.size(); ++k)
        if (h(k, k).re <= 0) {
            v.status = Transversality::NOT_TRANSVERSE;
            v.method = "diagonal";
            v.witness = SimpleFormWitness{unit_columns(subs[k]), h(k, k)};
            return v;
        }
    ComplexForm psi = holomorphic_form(n, q, pivot.x);
    if (auto cols = factor_simple(psi)) {
        v.status = Transversality::NOT_TRANSVERSE;
        v.method = (q <= 1 || q >= n - 1) ? "exact-degree" : "pivot";
        v.witness = SimpleFormWitness{*cols, volume_coefficient(omega, psi)};
        return v;
    }
    if (q <= 1 || q >= n - 1) throw std::logic_error("every form of this degree should be simple");

    ColumnSearch search(h, n, q);
    std::vector<ColumnSearch::Result> results(budget.restarts);
    parallel_for(budget.restarts, budget.threads, [&](int r) {
        std::mt19937_64 rng(budget.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r) + 1);
        results[r] = search.run(rng, budget.steps, budget.tolerance);
    });
    v.restarts = budget.restarts;
    v.min_margin = std::numeric_limits<double>::infinity();
    std::vector<int> order(results.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return results[a].value < results[b].value; });
    if (!order.empty()) v.min_margin = results[order.front()].value;
    double scale = to_eigen(h).norm();
    for (int r : order) {
        if (results[r].value > 1e-6 * scale) break;
        if (auto w = rationalize_witness(omega, search.normalise(results[r].m))) {
            v.status = Transversality::NOT_TRANSVERSE;
            v.method = "search";
            v.witness = std::move(w);
            return v;
        }
    }
    v.status = Transversality::INCONCLUSIVE;
    v.method = "none";
    return v;
}

bool verify_verdict(const ComplexForm& omega, int p, const TransversalityVerdict& v) {
    ComplexMatrix h = gram_matrix(omega, p);
    switch (v.status) {
    case Transversality::TRANSVERSE: {
        if (v.minors != leading_minors(h)) return false;
        return std::all_of(v.minors.begin(), v.minors.end(), [](const Rational& x) { return x > 0; });
    }
    case Transversality::NOT_TRANSVERSE: {
        if (!v.witness) return false;
        const int n = coframe_dim(omega);
        if (static_cast<int>(v.witness->columns.rows()) != n ||
            static_cast<int>(v.witness->columns.cols()) != n - p)
            return false;
        ComplexForm psi = wedge_columns(v.witness->columns);
        if (psi.is_zero()) return false;
        Scalar val = volume_coefficient(omega, psi);
        return val == v.witness->value && val.is_real() && val.re <= 0;
    }
    case Transversality::INCONCLUSIVE: return true;
    }
    return false;
}

bool verify_strongly_positive(const ComplexForm& omega, const std::vector<StrongTerm>& terms) {
    ComplexForm sum(omega.rank());
    for (const auto& t : terms) {
        if (t.c <= 0) return false;
        ComplexForm prod = ComplexForm::monomial(omega.rank(), 0);
        for (const auto& eta : t.etas) {
            try {
                one_form_coefficients(eta);
            } catch (const std::invalid_argument&) {
                return false;
            }
            prod = wedge(prod, Scalar::i() * wedge(eta, conjugate(eta)));
        }
        sum += Scalar(t.c) * prod;
    }
    return sum == omega;
}

MichelsohnRoot michelsohn_root(const ComplexForm& phi) {
    const int m = coframe_dim(phi);
    if (m < 2) throw std::invalid_argument("Michelsohn root needs m >= 2");
    ComplexMatrix h = gram_matrix(phi, m - 1);
    if (!is_positive_definite(h)) throw std::invalid_argument("form is not strictly positive");
    Rational det = determinant(h).re;
    auto hinv = *inverse(h);
    MichelsohnRoot out;
    // omega = i sum W_ab alpha^a ^ conj(alpha^b) with W = S H^{-1}, S^{m-1} = det H
    Rational s;
    if (exact_root(det, static_cast<unsigned>(m - 1), s)) {
        out.exact = true;
        out.omega = ComplexForm(2 * m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                out.omega.add_term(make_mask(m, Mask(1) << a, Mask(1) << b), Scalar::i() * Scalar(s) * hinv(a, b));
        if (!(divided_power(out.omega, m - 1) == phi)) throw std::logic_error("exact Michelsohn root failed");
        out.omega_float = to_float(out.omega);
        out.residual = 0.0;
        return out;
    }
    double sf = std::pow(det.convert_to<double>(), 1.0 / (m - 1));
    out.omega_float = FloatForm(2 * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            out.omega_float.add_term(make_mask(m, Mask(1) << a, Mask(1) << b),
                                     std::complex<double>(0, 1) * sf * hinv(a, b).to_complex());
    FloatForm diff = divided_power_t(out.omega_float, m - 1) - to_float(phi);
    for (const auto& [mask, c] : diff.terms()) out.residual = std::max(out.residual, std::abs(c));
    return out;
}

std::optional<std::vector<Rational>> find_positive_combination(const std::vector<ComplexMatrix>& hs,
                                                               const std::vector<std::vector<Rational>>& seeds,
                                                               const SearchBudget& budget) {
    if (hs.empty()) return std::nullopt;
    const std::size_t dim = hs.size();
    const std::size_t m = hs.front().rows();
    auto combine = [&](const std::vector<Rational>& y) {
        ComplexMatrix s(m, m);
        for (std::size_t i = 0; i < dim; ++i)
            if (y[i] != 0) s = s + Scalar(y[i]) * hs[i];
        return s;
    };
    for (const auto& y : seeds)
        if (is_positive_definite(combine(y))) return y;

    std::vector<CMat> hf;
    for (const auto& h : hs) hf.push_back(to_eigen(h));
    auto lambda_min = [&](const Eigen::VectorXd& y, CVec* vec) {
        CMat s = CMat::Zero(m, m);
        for (std::size_t i = 0; i < dim; ++i) s += y(i) * hf[i];
        Eigen::SelfAdjointEigenSolver<CMat> es(s);
        if (vec) *vec = es.eigenvectors().col(0);
        return es.eigenvalues()(0);
    };
    const int restarts = std::max(1, std::min(budget.restarts, 40));
    struct Best {
        double value = -std::numeric_limits<double>::infinity();
        Eigen::VectorXd y;
    };
    std::vector<Best> results(restarts);
    parallel_for(restarts, budget.threads, [&](int r) {
        std::mt19937_64 rng(budget.seed * 0xD1B54A32D192ED03ULL + static_cast<std::uint64_t>(r) + 7);
        std::normal_distribution<double> nd;
        Eigen::VectorXd y(dim);
        if (r < static_cast<int>(seeds.size())) {
            for (std::size_t i = 0; i < dim; ++i) y(i) = seeds[r][i].convert_to<double>();
        } else {
            for (std::size_t i = 0; i < dim; ++i) y(i) = nd(rng);
        }
        if (y.norm() == 0) y(0) = 1;
        y.normalize();
        Best best;
        for (int step = 0; step < budget.steps; ++step) {
            CVec v;
            double lam = lambda_min(y, &v);
            if (lam > best.value) best = {lam, y};
            Eigen::VectorXd g(dim);
            for (std::size_t i = 0; i < dim; ++i) g(i) = (v.adjoint() * hf[i] * v)(0, 0).real();
            g -= g.dot(y) * y;
            if (g.norm() < budget.tolerance) break;
            y += (0.5 / std::sqrt(step + 1.0)) * g / g.norm();
            y.normalize();
        }
        results[r] = best;
    });
    std::vector<int> order(restarts);
    for (int k = 0; k < restarts; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return results[a].value > results[b].value; });
    for (int r : order) {
        if (!(results[r].value > 0)) break;
        const auto& y = results[r].y;
        double top = y.cwiseAbs().maxCoeff();
        for (std::int64_t den : {1, 2, 10, 100, 1000, 10000, 1000000}) {
            std::vector<Rational> yr(dim);
            for (std::size_t i = 0; i < dim; ++i) yr[i] = rationalize(y(i) / top, den);
            if (is_positive_definite(combine(yr))) return yr;
        }
    }
    return std::nullopt;
}

}  // namespace pkl
