#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace mouldkit {

using Rational = boost::multiprecision::cpp_rational;

/* Exact Gaussian rational a + b*i, the coefficient field of every table in
   this library. cpp_rational keeps both parts in lowest terms with positive
   denominator, so equality is plain component comparison. */
struct Scalar {
    Rational re;
    Rational im;

    Scalar() : re(0), im(0) {}
    Scalar(long v) : re(v), im(0) {}
    Scalar(Rational r) : re(std::move(r)), im(0) {}
    Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }

    friend bool operator==(const Scalar&, const Scalar&) = default;

    Scalar operator-() const { return Scalar(-re, -im); }
    Scalar& operator+=(const Scalar& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
};

Scalar scalar_inverse(const Scalar& s);

/* Integer power, negative exponents allowed for nonzero base. */
Scalar scalar_pow(const Scalar& base, long e);

/* Bit-exact text form: `p/q` or `p`, complex as `re+im*i` with the `*`
   elided (`-1/3+2i`). Parsing and printing round-trip exactly. */
std::string to_string(const Scalar& s);
Scalar parse_scalar(const std::string& text);

std::string to_string(const Rational& r);

/* The multipliers mu_i of the diagonal linear part; all entries nonzero. */
using MultiplierVector = std::vector<Scalar>;

/* prod_i mu_i^{n_i}; this is how every exponential of a degree pairing is
   evaluated, keeping resonance decidable. */
Scalar multiplier_power(const MultiplierVector& mu, const std::vector<int>& n);

std::string to_string(const MultiplierVector& mu);

}  // namespace mouldkit
