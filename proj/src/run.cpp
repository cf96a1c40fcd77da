#include "mouldkit/run.hpp"

#include "mouldkit/trace_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mouldkit {

namespace {

int finish_normalization(const NormalizationTrace& trace, const std::filesystem::path& out_dir,
                         std::ostream& log) {
    VerifyReport report = verify_prenormal(trace);
    write_trace(out_dir, trace, report);
    log << (trace.kind == NormalizationKind::trim ? "trim" : "dulac") << ": "
        << trace.stages.size() << " sweep(s), trace written to " << out_dir.string() << "\n";
    log << format_report(report);
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int run_trim(const PreparedDiffeo& f, const std::filesystem::path& out_dir, std::ostream& log) {
    return finish_normalization(trim_iterate(f), out_dir, log);
}

int run_dulac(const PreparedDiffeo& f, const std::filesystem::path& out_dir, std::ostream& log) {
    return finish_normalization(dulac_iterate(f), out_dir, log);
}

int run_linearize(const PreparedDiffeo& f, const std::filesystem::path& out_dir,
                  std::ostream& log) {
    LinearizeResult r = linearize(f);
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream os(out_dir / "LinearizationTheta.tsv", std::ios::binary);
        dump_mould_tsv(os, "LinearizationTheta", r.theta);
    }
    {
        std::ofstream os(out_dir / "normalizer.tsv", std::ios::binary);
        write_jet_tsv(os, r.normalizer_map, f.nu, f.mu, f.trunc);
    }
    {
        std::ofstream os(out_dir / "final_jet.tsv", std::ios::binary);
        write_jet_tsv(os, operator_to_map(r.conjugated, f.mu), f.nu, f.mu, f.trunc);
    }
    {
        std::ofstream os(out_dir / "report.txt", std::ios::binary);
        os << (r.check ? "[PASS] " : "[FAIL] ") << "linearization: conjugated form is linear\n"
           << (r.check ? "RESULT: PASS" : "RESULT: FAIL") << "\n";
    }
    log << "linearize: trace written to " << out_dir.string() << "\n";
    log << (r.check ? "[PASS]" : "[FAIL]") << " linearization check\n";
    return r.check ? 0 : 1;
}

int run_mould(const PreparedDiffeo& f, const std::string& name, int max_weight,
              const std::string& format, std::ostream& out) {
    if (format != "tsv")
        throw std::invalid_argument("unknown mould dump format '" + format + "'");

    std::vector<DegVec> base = all_valid_letters(f.nu, max_weight);
    bool needs_closure = (name == "Trem" || name == "trem" || name == "Dulac" || name == "dulac");
    auto ctx = make_context(f.nu, f.mu, max_weight,
                            needs_closure ? norm_closure(f.nu, base, max_weight) : base);

    auto first_K = [&]() -> int {
        ResonanceProfile p = resonance_profile(*ctx, ctx->letters());
        if (!p.K)
            throw std::domain_error("mould '" + name + "': every letter is resonant, K undefined");
        return *p.K;
    };

    Mould m(ctx);
    if (name == "Dem")
        m = mould_Dem(ctx);
    else if (name == "dem")
        m = mould_dem(ctx);
    else if (name == "Sem")
        m = mould_Sem(ctx);
    else if (name == "sem")
        m = mould_sem(ctx);
    else if (name == "Den")
        m = mould_Den(ctx, first_K());
    else if (name == "Poin")
        m = mould_Poin(ctx, first_K());
    else if (name == "poin")
        m = mould_poin(ctx, first_K());
    else if (name == "Trem")
        m = stationary_limit_moulds(ctx, NormalizationKind::trim).capital;
    else if (name == "trem")
        m = stationary_limit_moulds(ctx, NormalizationKind::trim).small;
    else if (name == "Dulac")
        m = stationary_limit_moulds(ctx, NormalizationKind::dulac).capital;
    else if (name == "dulac")
        m = stationary_limit_moulds(ctx, NormalizationKind::dulac).small;
    else if (name == "LinearizationTheta")
        m = linearization_mould(ctx);
    else
        throw std::invalid_argument("unknown mould name '" + name + "'");

    dump_mould_tsv(out, name, m);
    return 0;
}

int run_verify(const std::filesystem::path& trace_dir, std::ostream& log) {
    NormalizationTrace trace = read_trace(trace_dir);
    VerifyReport report = verify_prenormal(trace);
    log << format_report(report);
    return report.all_pass() ? 0 : 1;
}

}  // namespace mouldkit
