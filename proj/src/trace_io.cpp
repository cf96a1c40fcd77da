#include "mouldkit/trace_io.hpp"

#include "mouldkit/diffeo_spec.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mouldkit {

namespace {

using nlohmann::json;

std::string stage_dir_name(size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "stage-%03zu", i);
    return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
    out << content;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string letters_listing(const std::vector<DegVec>& letters) {
    std::string out;
    for (const auto& l : letters)
        out += to_string(l) + "\n";
    return out;
}

std::string mould_file(const std::string& name, const Mould& m) {
    std::ostringstream os;
    dump_mould_tsv(os, name, m);
    return os.str();
}

}  // namespace

void write_jet_tsv(std::ostream& os, const PolyMap& map, int nu, const MultiplierVector& mu,
                   int trunc) {
    os << "# jet nu=" << nu << " mu=" << to_string(mu) << " degree=" << trunc << "\n";
    for (int i = 0; i < nu; ++i)
        for (const auto& [m, c] : map[i].coeffs)
            os << (i + 1) << "\t" << to_string(m) << "\t" << to_string(c) << "\n";
}

PolyMap read_jet_tsv(std::istream& is, int nu) {
    PolyMap map(nu);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream row(line);
        std::string comp, expo, coeff;
        if (!std::getline(row, comp, '\t') || !std::getline(row, expo, '\t') ||
            !std::getline(row, coeff))
            throw std::invalid_argument("jet table: bad row '" + line + "'");
        int i = std::stoi(comp);
        if (i < 1 || i > nu)
            throw std::invalid_argument("jet table: component out of range in '" + line + "'");
        map[i - 1].add_term(parse_degvec(expo), parse_scalar(coeff));
    }
    return map;
}

namespace {

std::string jet_file(const PolyMap& map, int nu, const MultiplierVector& mu, int trunc) {
    std::ostringstream os;
    write_jet_tsv(os, map, nu, mu, trunc);
    return os.str();
}

/* the stage automorphism as a prepared diffeo again (the sweeps preserve the
   linear part) */
PreparedDiffeo stage_diffeo(const PolyMap& map, const PreparedDiffeo& f) {
    PreparedDiffeo g;
    g.nu = f.nu;
    g.mu = f.mu;
    g.trunc = f.trunc;
    g.h.assign(f.nu, TruncatedPoly{});
    for (int i = 0; i < f.nu; ++i) {
        TruncatedPoly rest = map[i];
        DegVec e(f.nu, 0);
        e[i] = 1;
        rest.add_term(e, -f.mu[i]);
        for (const auto& [m, c] : rest.coeffs)
            if (total_degree(m) < 2)
                throw std::invalid_argument("stage jet is not in prepared form (term at " +
                                            to_string(m) + ")");
        g.h[i] = rest;
    }
    return g;
}

}  // namespace

void write_trace(const std::filesystem::path& dir, const NormalizationTrace& trace,
                 const VerifyReport& report) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto& f = trace.f;
    const bool trim = trace.kind == NormalizationKind::trim;

    json ctx;
    ctx["kind"] = trim ? "trim" : "dulac";
    ctx["nu"] = f.nu;
    json mus = json::array();
    for (const auto& m : f.mu)
        mus.push_back(to_string(m));
    ctx["multipliers"] = mus;
    ctx["truncation"] = f.trunc;
    ctx["stages"] = trace.stages.size();
    ctx["K_sequence"] = trace.K_sequence;
    write_file(dir / "context.json", ctx.dump(2) + "\n");
    write_file(dir / "spec.json", diffeo_spec_to_json(f));

    for (size_t i = 0; i < trace.stages.size(); ++i) {
        const auto& st = trace.stages[i];
        fs::path sd = dir / stage_dir_name(i);
        fs::create_directories(sd);
        write_file(sd / "jet.tsv",
                   jet_file(operator_to_map(st.before, f.mu), f.nu, f.mu, f.trunc));
        PolyMap norm_map;
        for (int c = 0; c < f.nu; ++c) {
            DegVec e(f.nu, 0);
            e[c] = 1;
            norm_map.push_back(op_apply(st.normalizer, poly_monomial(e, Scalar(1))));
        }
        write_file(sd / "normalizer.tsv", jet_file(norm_map, f.nu, f.mu, f.trunc));
        write_file(sd / "B_alphabet.txt", letters_listing(st.b_letters));
        write_file(sd / "D_alphabet.txt", letters_listing(st.d_letters));
        write_file(sd / (trim ? "Dem.tsv" : "Den.tsv"),
                   mould_file(trim ? "Dem" : "Den", st.letter_mould));
        write_file(sd / (trim ? "Sem.tsv" : "Poin.tsv"),
                   mould_file(trim ? "Sem" : "Poin", st.d_conj_mould));
        write_file(sd / (trim ? "sem.tsv" : "poin.tsv"),
                   mould_file(trim ? "sem" : "poin", st.b_conj_mould));
    }

    write_file(dir / (trim ? "trem.tsv" : "dulac.tsv"),
               mould_file(trim ? "trem" : "dulac", trace.small_limit));
    write_file(dir / (trim ? "Trem.tsv" : "Dulac.tsv"),
               mould_file(trim ? "Trem" : "Dulac", trace.capital_limit));
    write_file(dir / "final_jet.tsv",
               jet_file(operator_to_map(trace.final_series, f.mu), f.nu, f.mu, f.trunc));
    write_file(dir / "report.txt", format_report(report));
}

NormalizationTrace read_trace(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    json ctx = json::parse(read_file(dir / "context.json"));
    NormalizationTrace trace;
    trace.kind = ctx.at("kind").get<std::string>() == "trim" ? NormalizationKind::trim
                                                             : NormalizationKind::dulac;
    trace.f = parse_diffeo_spec_text(read_file(dir / "spec.json"), (dir / "spec.json").string());
    const auto& f = trace.f;
    if (ctx.at("nu").get<int>() != f.nu || ctx.at("truncation").get<int>() != f.trunc)
        throw std::invalid_argument("trace context does not match its stored spec");
    trace.K_sequence = ctx.at("K_sequence").get<std::vector<int>>();
    size_t n_stages = ctx.at("stages").get<size_t>();
    trace.stationary = true;

    const bool trim = trace.kind == NormalizationKind::trim;
    for (size_t i = 0; i < n_stages; ++i) {
        fs::path sd = dir / stage_dir_name(i);
        NormalizationStage st;
        {
            std::istringstream is(read_file(sd / "jet.tsv"));
            PolyMap map = read_jet_tsv(is, f.nu);
            st.before = extract_B(stage_diffeo(map, f));
        }
        {
            std::istringstream is(read_file(sd / "normalizer.tsv"));
            PolyMap map = read_jet_tsv(is, f.nu);
            st.normalizer = substitution_operator(map, f.trunc);
        }
        st.log_parts = op_log(st.before);
        st.b_letters = alphabet_of(st.before);
        st.d_letters = alphabet_of(st.log_parts);
        st.K = (trace.K_sequence.size() > i) ? trace.K_sequence[i] : 0;
        trace.stages.push_back(std::move(st));
    }
    {
        std::istringstream is(read_file(dir / "final_jet.tsv"));
        PolyMap map = read_jet_tsv(is, f.nu);
        trace.final_series = extract_B(stage_diffeo(map, f));
    }

    // limit moulds live over the closures of the stage-0 alphabets
    std::vector<DegVec> b0, d0;
    if (!trace.stages.empty()) {
        b0 = trace.stages[0].b_letters;
        d0 = trace.stages[0].d_letters;
    } else {
        b0 = alphabet_of(trace.final_series);
        d0 = alphabet_of(op_log(trace.final_series));
    }
    trace.b_closure_ctx = make_context(f.nu, f.mu, f.trunc, norm_closure(f.nu, b0, f.trunc));
    trace.d_closure_ctx = make_context(f.nu, f.mu, f.trunc, norm_closure(f.nu, d0, f.trunc));
    {
        std::istringstream is(read_file(dir / (trim ? "trem.tsv" : "dulac.tsv")));
        trace.small_limit = parse_mould_tsv(is, trace.b_closure_ctx);
    }
    {
        std::istringstream is(read_file(dir / (trim ? "Trem.tsv" : "Dulac.tsv")));
        trace.capital_limit = parse_mould_tsv(is, trace.d_closure_ctx);
    }
    return trace;
}

}  // namespace mouldkit
