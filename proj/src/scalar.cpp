#include "mouldkit/scalar.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace mouldkit {

Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero())
        throw std::domain_error("scalar division by zero");
    Rational n = b.re * b.re + b.im * b.im;
    return Scalar((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
}

Scalar scalar_inverse(const Scalar& s) { return Scalar(Rational(1)) / s; }

Scalar scalar_pow(const Scalar& base, long e) {
    if (e < 0)
        return scalar_pow(scalar_inverse(base), -e);
    Scalar acc(Rational(1));
    Scalar b = base;
    long k = e;
    while (k > 0) {
        if (k & 1)
            acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1)
        os << "/" << denominator(r);
    return os.str();
}

std::string to_string(const Scalar& s) {
    if (s.im == 0)
        return to_string(s.re);
    std::string out = to_string(s.re);
    if (s.im > 0)
        out += "+" + to_string(s.im) + "i";
    else
        out += "-" + to_string(-s.im) + "i";
    return out;
}

namespace {

// Parses [+-]?digits(/digits)? starting at pos; advances pos.
Rational parse_rational_at(const std::string& t, size_t& pos) {
    bool negative = false;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
        negative = t[pos] == '-';
        ++pos;
    }
    size_t digits_begin = pos;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos])))
        ++pos;
    if (pos == digits_begin)
        throw std::invalid_argument("bad scalar literal: '" + t + "'");
    boost::multiprecision::cpp_int num(t.substr(digits_begin, pos - digits_begin));
    if (negative)
        num = -num;
    if (pos < t.size() && t[pos] == '/') {
        ++pos;
        size_t den_begin = pos;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos])))
            ++pos;
        if (pos == den_begin)
            throw std::invalid_argument("bad scalar literal: '" + t + "'");
        boost::multiprecision::cpp_int den(t.substr(den_begin, pos - den_begin));
        if (den == 0)
            throw std::invalid_argument("zero denominator in scalar literal: '" + t + "'");
        return Rational(num, den);
    }
    return Rational(num);
}

}  // namespace

Scalar parse_scalar(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    if (t.empty())
        throw std::invalid_argument("empty scalar literal");

    // pure imaginary shorthands: i, -i, +i, 2i, -3/4i
    auto is_sign = [](char c) { return c == '+' || c == '-'; };
    if (t.back() == 'i') {
        // find the split between real part and imaginary part: the sign that
        // starts the imaginary term, skipping a leading sign of the real part
        size_t split = std::string::npos;
        for (size_t k = 1; k + 1 < t.size(); ++k) {
            if (is_sign(t[k]) && t[k - 1] != '/')
                split = k;
        }
        std::string im_str;
        Rational re(0);
        if (split == std::string::npos) {
            im_str = t.substr(0, t.size() - 1);
        } else {
            size_t p = 0;
            re = parse_rational_at(t, p);
            if (p != split)
                throw std::invalid_argument("bad scalar literal: '" + text + "'");
            im_str = t.substr(split, t.size() - 1 - split);
        }
        Rational im;
        if (im_str.empty() || im_str == "+")
            im = 1;
        else if (im_str == "-")
            im = -1;
        else {
            size_t p = 0;
            im = parse_rational_at(im_str, p);
            if (p != im_str.size())
                throw std::invalid_argument("bad scalar literal: '" + text + "'");
        }
        return Scalar(re, im);
    }

    size_t p = 0;
    Rational re = parse_rational_at(t, p);
    if (p != t.size())
        throw std::invalid_argument("bad scalar literal: '" + text + "'");
    return Scalar(re);
}

Scalar multiplier_power(const MultiplierVector& mu, const std::vector<int>& n) {
    if (mu.size() != n.size())
        throw std::invalid_argument("multiplier_power: length mismatch");
    Scalar acc(Rational(1));
    for (size_t i = 0; i < mu.size(); ++i)
        acc *= scalar_pow(mu[i], n[i]);
    return acc;
}

std::string to_string(const MultiplierVector& mu) {
    std::string out = "(";
    for (size_t i = 0; i < mu.size(); ++i) {
        if (i)
            out += ",";
        out += to_string(mu[i]);
    }
    return out + ")";
}

}  // namespace mouldkit
