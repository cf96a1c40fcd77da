#pragma once

#include "mouldkit/alphabet.hpp"
#include "mouldkit/mould.hpp"
#include "mouldkit/poly.hpp"
#include "mouldkit/scalar.hpp"

#include <map>
#include <vector>

namespace mouldkit {

/* Homogeneous degree-shifting operator on the truncated monomial basis:
   x^m -> action[m] * x^{m+degree}. Absent entries are 0. */
struct HomOperator {
    DegVec degree;
    std::map<DegVec, Scalar, LetterLess> action;

    bool is_zero() const { return action.empty(); }
    Scalar entry(const DegVec& m) const {
        auto it = action.find(m);
        return it == action.end() ? Scalar() : it->second;
    }
    void add_entry(const DegVec& m, const Scalar& c);

    bool operator==(const HomOperator&) const = default;
};

/* constant * Id plus a graded sum of homogeneous parts, every part raising
   total degree by >= 1. Products, exponentials and logarithms stay inside
   this class on the truncated algebra. */
struct OperatorSeries {
    int nu = 0;
    int trunc = 0;
    Scalar constant;
    std::map<DegVec, HomOperator, LetterLess> parts;

    const HomOperator* part(const DegVec& d) const {
        auto it = parts.find(d);
        return it == parts.end() ? nullptr : &it->second;
    }
    void add_part_entry(const DegVec& degree, const DegVec& m, const Scalar& c);
    bool parts_empty() const { return parts.empty(); }

    bool operator==(const OperatorSeries&) const = default;
};

OperatorSeries op_zero(int nu, int trunc);
OperatorSeries op_identity(int nu, int trunc);
OperatorSeries op_add(const OperatorSeries& a, const OperatorSeries& b);
OperatorSeries op_sub(const OperatorSeries& a, const OperatorSeries& b);
OperatorSeries op_scale(const Scalar& c, const OperatorSeries& a);

TruncatedPoly op_apply(const OperatorSeries& p, const TruncatedPoly& phi);

/* composition a o b */
OperatorSeries op_mul(const OperatorSeries& a, const OperatorSeries& b);
OperatorSeries op_commutator(const OperatorSeries& a, const OperatorSeries& b);

/* exp of a degree-raising series (constant part must be 0); the series
   terminates because each part raises total degree */
OperatorSeries op_exp(const OperatorSeries& p);
/* log of Id + degree-raising remainder (constant part must be 1) */
OperatorSeries op_log(const OperatorSeries& p);
/* inverse of a series with nonzero constant part */
OperatorSeries op_inverse(const OperatorSeries& p);

/* F_lin^{-1} . P . F_lin : part of degree d scaled by mu^{-d}; the operator
   realization of the e^Delta map on moulds */
OperatorSeries flin_twist(const OperatorSeries& p, const MultiplierVector& mu);

/* P commutes with F_lin iff it equals its twist iff every part has
   resonant degree */
bool commutes_with_flin(const OperatorSeries& p, const MultiplierVector& mu);

/* Diffeo in prepared form: x -> diag(mu) x + h(x), h of valuation >= 2. */
struct PreparedDiffeo {
    int nu = 0;
    MultiplierVector mu;
    std::vector<TruncatedPoly> h;
    int trunc = 0;
};

void validate_prepared(const PreparedDiffeo& f);
/* the map f itself as a jet tuple */
PolyMap diffeo_map(const PreparedDiffeo& f);

/* Substitution operator phi -> phi o g of a tangent-to-identity map g,
   as Id + degree-raising parts. */
OperatorSeries substitution_operator(const PolyMap& g, int trunc);

/* Homogeneous decomposition F = F_lin (Id + sum B_n): returns the series
   Id + sum B_n, i.e. the substitution operator of x + h(f_lin^{-1} x). */
OperatorSeries extract_B(const PreparedDiffeo& f);

/* Derivation alphabet: log of Id + sum B_n, split into homogeneous parts. */
OperatorSeries extract_D(const PreparedDiffeo& f);
OperatorSeries extract_D(const OperatorSeries& id_plus_b);

/* letters carried by the nonzero parts; throws if one falls outside the
   valid letter set */
std::vector<DegVec> alphabet_of(const OperatorSeries& p);

/* sum over words of M^w B_w with B_w = B_{n_1} o ... o B_{n_r} read from the
   parts of `ops`; the empty word contributes M^{} Id. */
OperatorSeries mould_expand(const Mould& m, const OperatorSeries& ops);

/* Operator route of conjugation: the series C with
   Theta . F . Theta^{-1} = F_lin . C, for F = F_lin . p. */
OperatorSeries conjugate_operator(const OperatorSeries& theta, const OperatorSeries& p,
                                  const MultiplierVector& mu);

/* Mould route of the same conjugation: e^Delta(Theta) . (1 + I) . invTheta */
Mould conjugation_mould(const Mould& theta);

/* the map represented by F = F_lin . p, recovered on coordinate functions */
PolyMap operator_to_map(const OperatorSeries& p, const MultiplierVector& mu);

/* truncated Baker-Campbell-Hausdorff combination A + B + [A,B]/2 +
   [A,[A,B]]/12 - [B,[A,B]]/12; no terms beyond bracket depth 3, so order 4
   adds nothing. Test helper only: production paths use op_exp/op_log. */
OperatorSeries bch_star(const OperatorSeries& a, const OperatorSeries& b, int order);

}  // namespace mouldkit
