#pragma once

#include "mouldkit/alphabet.hpp"
#include "mouldkit/scalar.hpp"

#include <map>
#include <vector>

namespace mouldkit {

/* Sparse polynomial on nu variables: exponent vector -> coefficient.
   No stored zero coefficients. Truncation degree is passed to the
   operations that can raise degree. */
struct TruncatedPoly {
    std::map<DegVec, Scalar, LetterLess> coeffs;

    bool is_zero() const { return coeffs.empty(); }
    Scalar coeff(const DegVec& m) const {
        auto it = coeffs.find(m);
        return it == coeffs.end() ? Scalar() : it->second;
    }
    void add_term(const DegVec& m, const Scalar& c);

    bool operator==(const TruncatedPoly&) const = default;
};

TruncatedPoly poly_monomial(const DegVec& m, Scalar c);
TruncatedPoly poly_add(const TruncatedPoly& a, const TruncatedPoly& b);
TruncatedPoly poly_sub(const TruncatedPoly& a, const TruncatedPoly& b);
TruncatedPoly poly_scale(const Scalar& c, const TruncatedPoly& a);
TruncatedPoly poly_mul(const TruncatedPoly& a, const TruncatedPoly& b, int trunc);
TruncatedPoly poly_truncate(const TruncatedPoly& a, int trunc);
TruncatedPoly poly_derivative(const TruncatedPoly& a, int var);

/* phi(g_1,...,g_nu) truncated; every g_i must have zero constant term so the
   result is again a polynomial jet. */
TruncatedPoly poly_substitute(const TruncatedPoly& phi, const std::vector<TruncatedPoly>& g,
                              int trunc);

/* x^m -> mu^m x^m, the substitution operator of the linear part */
TruncatedPoly flin_apply(const MultiplierVector& mu, const TruncatedPoly& p);

/* coefficient of x^t multiplied by mu^t (variable rescaling x_i -> mu_i x_i) */
TruncatedPoly scale_variables(const TruncatedPoly& p, const MultiplierVector& mu);

std::string to_string(const TruncatedPoly& p);

/* all m in N^nu with 1 <= |m| <= max_degree, canonical order */
std::vector<DegVec> enumerate_monomials(int nu, int max_degree);

/* maps C^nu -> C^nu as tuples of jets */
using PolyMap = std::vector<TruncatedPoly>;

PolyMap map_identity(int nu);
/* g o f truncated; f must have zero constant terms */
PolyMap map_compose(const PolyMap& g, const PolyMap& f, int trunc);
bool map_equal(const PolyMap& a, const PolyMap& b);

}  // namespace mouldkit
