#pragma once

#include "mouldkit/alphabet.hpp"
#include "mouldkit/mould.hpp"
#include "mouldkit/operators.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mouldkit {

/* ---- universal moulds ----------------------------------------------------
   Values depend only on the letters' degree vectors and the multipliers, so
   every builder takes just a context. Capital moulds live on the derivation
   alphabet, lower-case ones on the homogeneous-component alphabet. */

/* 1/(1 - mu^{-m}) on single nonresonant letters, 0 elsewhere. One exp step
   with this generator cancels every nonresonant letter of lowest weight. */
Mould mould_Dem(ContextPtr ctx);

/* closed form on the component alphabet:
   (-1)^{l+1}/l * 1/(1 - mu^{-norm}) on words of nonresonant norm */
Mould mould_dem(ContextPtr ctx);

/* Dem restricted to nonresonant letters of weight K */
Mould mould_Den(ContextPtr ctx, int K);

/* conjugated-form moulds of one simplification sweep */
Mould mould_Sem(ContextPtr ctx);
Mould mould_sem(ContextPtr ctx);
Mould mould_Poin(ContextPtr ctx, int K);
Mould mould_poin(ContextPtr ctx, int K);

/* closed formula for Sem on one word (suffix/prefix expansion of the
   three-factor product); must agree with mould_Sem everywhere */
Scalar explicit_Sem_value(const TruncationContext& ctx, const Word& w);
Mould mould_Sem_explicit(ContextPtr ctx);

/* formal linearization mould: on n_1...n_r the product over i of
   1/(mu^{-(n_i+...+n_r)} - 1); throws if some suffix norm is resonant */
Mould linearization_mould(ContextPtr ctx);

/* composition with a right factor whose empty-word value is 1 (the factor's
   empty-word value is never read; result keeps M's) */
Mould affine_compose(const Mould& m, const Mould& n);

/* ---- resonance profile --------------------------------------------------- */

struct ResonanceProfile {
    std::optional<int> K;  // lowest weight carrying a nonresonant letter
    std::map<int, std::vector<DegVec>> Nk;
};

ResonanceProfile resonance_profile(const TruncationContext& ctx,
                                   const std::vector<DegVec>& letters);

/* weights 1..max_weight that carry a nonresonant valid letter; the stage-K
   sequence of the Poincare procedure when every letter is present */
std::vector<int> universal_K_sequence(int nu, const MultiplierVector& mu, int max_weight);

/* ---- normalization chains ------------------------------------------------ */

enum class NormalizationKind { trim, dulac };

struct NormalizationStage {
    OperatorSeries before;      // P_i with F_i = F_lin . P_i
    OperatorSeries log_parts;   // derivation series of F_i
    std::vector<DegVec> b_letters;
    std::vector<DegVec> d_letters;
    int K = 0;                  // dulac sweeps only
    OperatorSeries generator;   // V_i
    OperatorSeries normalizer;  // exp(V_i)
    OperatorSeries after;       // exp(V_i) F_i exp(-V_i) as an F_lin . P form
    Mould letter_mould;         // Dem or Den over the stage D-alphabet
    Mould d_conj_mould;         // Sem or Poin over the stage D-alphabet
    Mould b_conj_mould;         // sem or poin over the stage B-alphabet
};

/* One cancellation sweep applied to p (with F = F_lin . p): trim targets
   every nonresonant derivation component, dulac only those of lowest
   weight. Returns the stage record, its mould tables and the conjugated
   result, with the sweep identities checked exactly; nullopt when there is
   nothing left to cancel. */
std::optional<NormalizationStage> normalization_sweep(const OperatorSeries& p,
                                                      const MultiplierVector& mu,
                                                      NormalizationKind kind);

struct NormalizationTrace {
    PreparedDiffeo f;
    NormalizationKind kind = NormalizationKind::trim;
    std::vector<NormalizationStage> stages;
    OperatorSeries final_series;  // P with F_final = F_lin . P
    bool stationary = false;
    std::vector<int> K_sequence;  // dulac: K of each sweep

    /* stationary-limit moulds over the norm closures of the stage-0
       alphabets, plus those contexts */
    ContextPtr b_closure_ctx;
    ContextPtr d_closure_ctx;
    Mould small_limit;    // trem or dulac
    Mould capital_limit;  // Trem or Dulac
};

/* One sweep: cancels all nonresonant derivation components (trim) or only
   those of lowest weight (dulac); iterated to the stationary limit, at most
   trunc sweeps, with exact stage-identity checks along the way. */
NormalizationTrace trim_iterate(const PreparedDiffeo& f);
NormalizationTrace dulac_iterate(const PreparedDiffeo& f);

/* limstat of the composition chain over an explicit (norm-closed) context.
   Trim iterates the fixed sweep mould to stationarity; the Poincare chain
   sweeps each weight of the context that carries a nonresonant letter, in
   ascending order. */
struct MouldLimit {
    Mould small;    // B side
    Mould capital;  // D side
    int sweeps = 0;
};
MouldLimit stationary_limit_moulds(ContextPtr ctx, NormalizationKind kind);

struct LinearizeResult {
    Mould theta;                 // L_r table over the B-alphabet context
    OperatorSeries theta_op;     // sum of theta-weighted component products
    PolyMap normalizer_map;      // theta_op on coordinates: the linearizing chart
    OperatorSeries conjugated;   // theta^{-1} . F . theta as an F_lin . C form
    bool check = false;          // conjugated == Id, i.e. the result is F_lin
};
LinearizeResult linearize(const PreparedDiffeo& f);

/* ---- verification --------------------------------------------------------- */

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

/* (a) stagewise and chained conjugacy, (b) the final form commutes with
   F_lin, (c) limit moulds vanish off resonant norms, (d) trim fixed-point
   identities, (e) limit-mould expansions reproduce the final form. */
VerifyReport verify_prenormal(const NormalizationTrace& trace);

std::string format_report(const VerifyReport& report);

}  // namespace mouldkit
