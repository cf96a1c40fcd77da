#pragma once

#include "mouldkit/prenormal.hpp"

#include <filesystem>

namespace mouldkit {

/* One directory per run:
     context.json            dimensions, multipliers, truncation, kind, K sweep list
     spec.json               the input diffeo, re-serialized canonically
     stage-<i>/jet.tsv       map of the stage's automorphism
     stage-<i>/normalizer.tsv  map of exp(V_i)
     stage-<i>/B_alphabet.txt, D_alphabet.txt
     stage-<i>/<moulds>.tsv  Dem/Sem/sem (trim) or Den/Poin/poin (dulac)
     Trem.tsv + trem.tsv  or  Dulac.tsv + dulac.tsv
     final_jet.tsv
     report.txt              verify_prenormal output
   All files byte-deterministic for a given input. */
void write_trace(const std::filesystem::path& dir, const NormalizationTrace& trace,
                 const VerifyReport& report);

/* Rebuilds the operator data of a stored trace from its jets and re-parses
   the mould tables; used by the `verify` command. */
NormalizationTrace read_trace(const std::filesystem::path& dir);

/* jet tables: `component<TAB>exponent<TAB>coefficient` rows */
void write_jet_tsv(std::ostream& os, const PolyMap& map, int nu, const MultiplierVector& mu,
                   int trunc);
PolyMap read_jet_tsv(std::istream& is, int nu);

}  // namespace mouldkit
