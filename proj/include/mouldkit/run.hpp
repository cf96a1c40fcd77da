#pragma once

#include "mouldkit/operators.hpp"
#include "mouldkit/prenormal.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace mouldkit {

/* Batch entry points shared by the CLI and the test suites. They print a
   short summary to `log` and return the process exit status: 0 when every
   internal check passed. Input and computation errors escape as
   exceptions for the caller to report. */

int run_trim(const PreparedDiffeo& f, const std::filesystem::path& out_dir, std::ostream& log);
int run_dulac(const PreparedDiffeo& f, const std::filesystem::path& out_dir, std::ostream& log);
int run_linearize(const PreparedDiffeo& f, const std::filesystem::path& out_dir,
                  std::ostream& log);

/* Universal table of a named mould (Dem, dem, Sem, sem, Den, Poin, poin,
   Trem, trem, Dulac, dulac, LinearizationTheta) over the full valid letter
   set of the spec's multipliers, weight <= max_weight. */
int run_mould(const PreparedDiffeo& f, const std::string& name, int max_weight,
              const std::string& format, std::ostream& out);

int run_verify(const std::filesystem::path& trace_dir, std::ostream& log);

}  // namespace mouldkit
