#include "mouldkit/diffeo_spec.hpp"
#include "mouldkit/run.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

mouldkit::PreparedDiffeo load_spec(const std::string& path, int degree_override) {
    mouldkit::PreparedDiffeo f = mouldkit::load_diffeo_spec(path);
    if (degree_override > 0) {
        f.trunc = degree_override;
        mouldkit::validate_prepared(f);
    }
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mouldkit: exact mould-calculus normal forms for prepared diffeomorphisms"};
    app.require_subcommand(1);

    std::string spec_path, out_dir, mould_name, trace_dir, format = "tsv";
    int degree = 0;
    int max_weight = 4;

    auto add_spec_out = [&](CLI::App* cmd) {
        cmd->add_option("--spec", spec_path, "diffeo spec file (JSON)")->required();
        cmd->add_option("--degree", degree, "override the truncation degree");
        cmd->add_option("--out", out_dir, "output trace directory")->required();
    };

    CLI::App* trim = app.add_subcommand("trim", "iterate the simplification sweep to its limit");
    add_spec_out(trim);
    CLI::App* dulac =
        app.add_subcommand("dulac", "iterate the lowest-degree cancellation to its limit");
    add_spec_out(dulac);
    CLI::App* lin = app.add_subcommand("linearize", "conjugate to the linear part (nonresonant)");
    add_spec_out(lin);

    CLI::App* mould = app.add_subcommand("mould", "dump a named universal mould table");
    mould->add_option("--spec", spec_path, "diffeo spec file (JSON)")->required();
    mould->add_option("--name", mould_name, "mould name")->required();
    mould->add_option("--max-weight", max_weight, "table weight bound (default 4)");
    mould->add_option("--format", format, "output format (tsv)");

    CLI::App* verify = app.add_subcommand("verify", "re-check a stored trace");
    verify->add_option("--trace", trace_dir, "trace directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (trim->parsed())
            return mouldkit::run_trim(load_spec(spec_path, degree), out_dir, std::cout);
        if (dulac->parsed())
            return mouldkit::run_dulac(load_spec(spec_path, degree), out_dir, std::cout);
        if (lin->parsed())
            return mouldkit::run_linearize(load_spec(spec_path, degree), out_dir, std::cout);
        if (mould->parsed())
            return mouldkit::run_mould(load_spec(spec_path, degree), mould_name, max_weight,
                                       format, std::cout);
        if (verify->parsed())
            return mouldkit::run_verify(trace_dir, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
