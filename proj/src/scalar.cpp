#include "pkl/scalar.hpp"

#include <cctype>
#include <cmath>

namespace pkl {

Scalar i_power(long k) {
    switch (((k % 4) + 4) % 4) {
    case 0: return Scalar(1);
    case 1: return Scalar::i();
    case 2: return Scalar(-1);
    default: return -Scalar::i();
    }
}

std::string to_string(const Rational& q) { return q.str(); }

std::string to_string(const Scalar& s) {
    if (s.im == 0) return s.re.str();
    std::string imag;
    if (s.im == 1) imag = "i";
    else if (s.im == -1) imag = "-i";
    else imag = s.im.str() + "i";
    if (s.re == 0) return imag;
    std::string out = "(" + s.re.str();
    if (imag[0] != '-') out += "+";
    return out + imag + ")";
}

Rational parse_rational(std::string_view text) {
    std::size_t pos = 0;
    auto fail = [&](const char* msg) { throw ParseError(msg, pos); };
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    auto read_int = [&]() {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) fail("expected digits");
        return Integer(std::string(text.substr(start, pos - start)));
    };
    Integer num = read_int();
    Integer den = 1;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        den = read_int();
        if (den == 0) fail("zero denominator");
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) fail("unexpected character in rational");
    Rational q(num, den);
    return negative ? -q : q;
}

Scalar parse_scalar(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    std::string_view s = trim(text);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = trim(s.substr(1, s.size() - 2));
    if (s.empty()) throw ParseError("empty scalar", 0);
    if (s.back() != 'i') return Scalar(parse_rational(s));

    // Locate the split between real and imaginary parts: the last sign that is
    // not the leading character.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = s.size() - 1; k > 0; --k) {
        if (s[k] == '+' || s[k] == '-') { split = k; break; }
    }
    Rational re(0);
    std::string_view imag = s;
    if (split != std::string_view::npos) {
        re = parse_rational(s.substr(0, split));
        imag = s.substr(split);
    }
    imag.remove_suffix(1);  // trailing 'i'
    imag = trim(imag);
    Rational im;
    if (imag.empty() || imag == "+") im = 1;
    else if (imag == "-") im = -1;
    else im = parse_rational(imag);
    return Scalar(re, im);
}

Rational rationalize(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) throw std::domain_error("cannot rationalize non-finite value");
    // Convergents h/k of the continued fraction of x.
    Integer h_prev = 1, h = static_cast<long long>(std::floor(x));
    Integer k_prev = 0, k = 1;
    double frac = x - std::floor(x);
    for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
        double inv = 1.0 / frac;
        auto a = static_cast<long long>(std::floor(inv));
        Integer k_next = a * k + k_prev;
        if (k_next > max_den) break;
        Integer h_next = a * h + h_prev;
        h_prev = h; h = h_next;
        k_prev = k; k = k_next;
        frac = inv - std::floor(inv);
    }
    return Rational(h, k);
}

namespace {
bool exact_int_root(const Integer& n, unsigned k, Integer& out) {
    if (n < 0) return false;
    Integer r;
    int exact = mpz_root(r.backend().data(), n.backend().data(), k);
    out = r;
    return exact != 0;
}
}  // namespace

bool exact_root(const Rational& q, unsigned k, Rational& out) {
    if (q < 0 || k == 0) return false;
    Integer num, den;
    if (!exact_int_root(boost::multiprecision::numerator(q), k, num)) return false;
    if (!exact_int_root(boost::multiprecision::denominator(q), k, den)) return false;
    out = Rational(num, den);
    return true;
}

}  // namespace pkl
