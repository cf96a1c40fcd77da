#pragma once

#include "mouldkit/alphabet.hpp"
#include "mouldkit/scalar.hpp"

#include <iosfwd>
#include <map>
#include <string>

namespace mouldkit {

/* A mould is a scalar-valued function on words, stored as an explicit sparse
   table over its context; absent words evaluate to 0. Tables never hold
   explicit zeros, so equality is table comparison. */
class Mould {
  public:
    Mould() = default;  // placeholder with no context; assign before use
    explicit Mould(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    const ContextPtr& context() const { return ctx_; }

    Scalar value(const Word& w) const;
    void set(const Word& w, Scalar v);
    void add_to(const Word& w, const Scalar& v);

    const std::map<Word, Scalar, WordLess>& table() const { return values_; }

    bool operator==(const Mould& o) const { return values_ == o.values_; }

  private:
    ContextPtr ctx_;
    std::map<Word, Scalar, WordLess> values_;
};

/* neutral element of the mould product: 1 on the empty word */
Mould mould_one(ContextPtr ctx);
/* neutral element of composition: 1 on every single-letter word */
Mould mould_id(ContextPtr ctx);

Mould mould_add(const Mould& a, const Mould& b);
Mould mould_sub(const Mould& a, const Mould& b);
Mould mould_neg(const Mould& a);
Mould mould_scale(const Scalar& c, const Mould& a);

/* (M.N)^a = sum over two-factor splits of a, empty factors included */
Mould mould_mul(const Mould& a, const Mould& b);

/* product inverse, requires M^{} != 0; built by length recursion over the
   context word universe */
Mould mould_inverse(const Mould& m);

/* (M o N)^a = sum over partitions of a into nonempty factors of
   M^{norms} * prod N^{factor}; requires N^{} = 0, (M o N)^{} = M^{}. */
Mould mould_compose(const Mould& m, const Mould& n);

/* Exp M = sum [M]_{xn} / n!, requires M^{} = 0. */
Mould mould_exp(const Mould& m);
/* Log of 1 + X with X = M - 1, requires M^{} = 1; coefficients
   (-1)^{n+1}/n so that Log and Exp are mutually inverse. */
Mould mould_log(const Mould& m);

/* Fast paths for moulds supported on single-letter words only:
   [Z]_{xr}^a = Z^{a_1}...Z^{a_r} on length-r words, else 0. */
Mould length1_power(const Mould& z, int r);
/* Exp Z: 1 on the empty word, [Z]_{xl}^a / l! on length-l words. */
Mould length1_exp(const Mould& z);
/* Log(1 + Z): (-1)^{l+1}/l * [Z]_{xl}^a on length-l words. */
Mould length1_log(const Mould& z);

/* value on each word multiplied by mu^{-norm}; ring morphism for the mould
   product and the bookkeeping for moving a series past the linear part */
Mould mould_edelta(const Mould& m);

/* `# mould <name> nu=.. mu=(..) maxWeight=..` then one `word<TAB>value` row
   per stored word, canonical order. */
void dump_mould_tsv(std::ostream& os, const std::string& name, const Mould& m);
/* reads rows of a dump; context supplied by the caller */
Mould parse_mould_tsv(std::istream& is, ContextPtr ctx);

}  // namespace mouldkit
