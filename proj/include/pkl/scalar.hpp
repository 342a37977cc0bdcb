#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pkl {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t column)
        : std::runtime_error(what + " (column " + std::to_string(column + 1) + ")"),
          column_(column) {}
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/// Exact Gaussian rational re + i*im. The only coefficient domain used for
/// certificates.
struct Scalar {
    Rational re{0};
    Rational im{0};

    Scalar() = default;
    Scalar(int r) : re(r) {}
    Scalar(Rational r) : re(std::move(r)) {}
    Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static Scalar i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    Scalar conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }
    std::complex<double> to_complex() const {
        return {re.convert_to<double>(), im.convert_to<double>()};
    }

    Scalar& operator+=(const Scalar& o) { re += o.re; im += o.im; return *this; }
    Scalar& operator-=(const Scalar& o) { re -= o.re; im -= o.im; return *this; }
    Scalar& operator*=(const Scalar& o) {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Scalar& operator/=(const Scalar& o) {
        if (o.is_zero()) throw std::domain_error("division by zero scalar");
        Rational d = o.norm2();
        Rational r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = std::move(r);
        return *this;
    }
    Scalar operator-() const { return {-re, -im}; }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
};

// Field-generic helpers used by the matrix templates.
inline bool is_zero(const Rational& x) { return x == 0; }
inline bool is_zero(const Scalar& x) { return x.is_zero(); }
inline bool is_zero(double x) { return x == 0.0; }
inline const Rational& conj(const Rational& x) { return x; }
inline Scalar conj(const Scalar& x) { return x.conj(); }

/// i^k for integer k (any sign).
Scalar i_power(long k);

std::string to_string(const Rational& q);
std::string to_string(const Scalar& s);

Rational parse_rational(std::string_view text);
/// Accepts "3/2", "-1/2i", "3/2+1/2i", "i", "-i", with optional surrounding
/// parentheses.
Scalar parse_scalar(std::string_view text);

/// Continued-fraction approximation with denominator bounded by max_den.
Rational rationalize(double x, std::int64_t max_den = 1000000);

/// Exact k-th root of a non-negative rational if it is rational.
bool exact_root(const Rational& q, unsigned k, Rational& out);

}  // namespace pkl
