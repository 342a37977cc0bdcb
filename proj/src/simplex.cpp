#include "pkl/simplex.hpp"

#include <stdexcept>

namespace pkl {

FeasibilityResult nonnegative_solution(const RationalMatrix& a, const std::vector<Rational>& b) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m) throw std::invalid_argument("simplex: rhs size mismatch");

    // Tableau [A' | I | b'] with rows sign-flipped so that b' >= 0.
    const std::size_t rhs = n + m;
    RationalMatrix t(m, n + m + 1);
    std::vector<int> sigma(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0) sigma[i] = -1;
        for (std::size_t j = 0; j < n; ++j) t(i, j) = sigma[i] * a(i, j);
        t(i, n + i) = 1;
        t(i, rhs) = sigma[i] * b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    // Reduced costs of the phase-one objective (sum of artificials).
    std::vector<Rational> cost(n + m + 1, Rational(0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) cost[j] -= t(i, j);
    for (std::size_t i = 0; i < m; ++i) cost[rhs] -= t(i, rhs);

    for (;;) {
        std::size_t enter = n + m;
        for (std::size_t j = 0; j < n + m; ++j)
            if (cost[j] < 0) { enter = j; break; }
        if (enter == n + m) break;

        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t(i, enter) <= 0) continue;
            Rational ratio = t(i, rhs) / t(i, enter);
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) throw std::logic_error("simplex: phase one unbounded");

        Rational inv = Rational(1) / t(leave, enter);
        for (std::size_t j = 0; j <= rhs; ++j) t(leave, j) *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t(i, enter) == 0) continue;
            Rational f = t(i, enter);
            for (std::size_t j = 0; j <= rhs; ++j)
                if (t(leave, j) != 0) t(i, j) -= f * t(leave, j);
        }
        Rational f = cost[enter];
        for (std::size_t j = 0; j <= rhs; ++j)
            if (t(leave, j) != 0) cost[j] -= f * t(leave, j);
        basis[leave] = enter;
    }

    Rational value(0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= n) value += t(i, rhs);

    FeasibilityResult result;
    if (value == 0) {
        result.feasible = true;
        result.x.assign(n, Rational(0));
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] < n) result.x[basis[i]] = t(i, rhs);
        return result;
    }
    // Phase-one duals y = c_B B^{-1}; B^{-1} sits in the artificial block.
    result.farkas.assign(m, Rational(0));
    for (std::size_t k = 0; k < m; ++k) {
        Rational y(0);
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] >= n) y += t(i, n + k);
        result.farkas[k] = -sigma[k] * y;
    }
    return result;
}

bool verify_feasibility(const RationalMatrix& a, const std::vector<Rational>& b,
                        const FeasibilityResult& result) {
    if (result.feasible) {
        if (result.x.size() != a.cols()) return false;
        for (const auto& xi : result.x)
            if (xi < 0) return false;
        return a * result.x == b;
    }
    if (result.farkas.size() != a.rows()) return false;
    auto aty = a.transpose() * result.farkas;
    for (const auto& v : aty)
        if (v < 0) return false;
    Rational by(0);
    for (std::size_t i = 0; i < b.size(); ++i) by += b[i] * result.farkas[i];
    return by < 0;
}

}  // namespace pkl
