#include "mouldkit/diffeo_spec.hpp"
#include "mouldkit/run.hpp"
#include "mouldkit/trace_io.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mouldkit;
namespace fs = std::filesystem;

namespace {

const char* kMinimalSpec = R"({
  "nu": 1,
  "multipliers": ["2"],
  "truncation": 6,
  "h": [ {"component": 1, "exponent": [2], "coefficient": "1"} ]
})";

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("mouldkit-test-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("spec parsing") {
    PreparedDiffeo f = parse_diffeo_spec_text(kMinimalSpec, "mem");
    CHECK(f.nu == 1);
    CHECK(f.mu[0] == Scalar(2));
    CHECK(f.trunc == 6);
    CHECK(f.h[0].coeff({2}) == Scalar(1));

    // round-trip through the canonical serialization
    PreparedDiffeo g = parse_diffeo_spec_text(diffeo_spec_to_json(f), "mem");
    CHECK(g.nu == f.nu);
    CHECK(g.mu == f.mu);
    CHECK(g.h[0] == f.h[0]);

    CHECK_THROWS_WITH_AS(
        parse_diffeo_spec_text(R"({"nu":1,"multipliers":["0"],"truncation":4})", "mem"),
        doctest::Contains("zero"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_diffeo_spec_text(
            R"({"nu":1,"multipliers":["2"],"truncation":4,
                "h":[{"component":1,"exponent":[1],"coefficient":"1"}]})",
            "mem"),
        doctest::Contains("degree"), std::invalid_argument);
    CHECK_THROWS_AS(parse_diffeo_spec_text("{oops", "mem"), std::invalid_argument);
    CHECK_THROWS_AS(
        parse_diffeo_spec_text(R"({"nu":2,"multipliers":["2"],"truncation":4})", "mem"),
        std::invalid_argument);
}

TEST_CASE("trim command on a nonresonant spec yields the linear jet") {
    PreparedDiffeo f = parse_diffeo_spec_text(kMinimalSpec, "mem");
    fs::path out = fresh_dir("trim-linear");
    std::ostringstream log;
    CHECK(run_trim(f, out, log) == 0);

    // final jet is exactly 2x
    std::string jet = slurp(out / "final_jet.tsv");
    CHECK(jet == "# jet nu=1 mu=(2) degree=6\n1\t(1)\t2\n");
    CHECK(fs::exists(out / "report.txt"));
    CHECK(slurp(out / "report.txt").find("RESULT: PASS") != std::string::npos);
}

TEST_CASE("mould command dumps the requested table") {
    PreparedDiffeo f = parse_diffeo_spec_text(kMinimalSpec, "mem");
    std::ostringstream out;
    CHECK(run_mould(f, "Dem", 2, "tsv", out) == 0);
    CHECK(out.str() == "# mould Dem nu=1 mu=(2) maxWeight=2\n(1)\t2\n(2)\t4/3\n");

    std::ostringstream theta;
    CHECK(run_mould(f, "LinearizationTheta", 2, "tsv", theta) == 0);
    CHECK(theta.str().find("(1)\t-2\n") != std::string::npos);

    std::ostringstream bad;
    CHECK_THROWS_AS(run_mould(f, "nosuch", 2, "tsv", bad), std::invalid_argument);
    CHECK_THROWS_AS(run_mould(f, "Dem", 2, "csv", bad), std::invalid_argument);
}

TEST_CASE("every named mould is dumpable") {
    PreparedDiffeo f = parse_diffeo_spec_text(kMinimalSpec, "mem");
    for (const char* name : {"Dem", "dem", "Sem", "sem", "Den", "Poin", "poin", "Trem", "trem",
                             "Dulac", "dulac", "LinearizationTheta"}) {
        std::ostringstream out;
        CHECK(run_mould(f, name, 3, "tsv", out) == 0);
        CHECK(out.str().rfind("# mould ", 0) == 0);
    }

    // K is undefined when every letter is resonant
    PreparedDiffeo trivial;
    trivial.nu = 1;
    trivial.mu = {Scalar(1)};
    trivial.trunc = 3;
    trivial.h.assign(1, TruncatedPoly{});
    std::ostringstream out;
    CHECK_THROWS_AS(run_mould(trivial, "Den", 3, "tsv", out), std::domain_error);
}

TEST_CASE("verifying a missing trace reports an error") {
    std::ostringstream log;
    CHECK_THROWS(run_verify("/nonexistent/mouldkit-trace", log));
}

TEST_CASE("traces verify after a disk round-trip, tampering is caught") {
    testkit::Rng rng(61);
    MultiplierVector mu{Scalar(2), Scalar(Rational(1, 2))};
    PreparedDiffeo f = testkit::random_diffeo(rng, mu, 4, 3);

    fs::path out = fresh_dir("verify-roundtrip");
    std::ostringstream log;
    REQUIRE(run_dulac(f, out, log) == 0);

    std::ostringstream vlog;
    CHECK(run_verify(out, vlog) == 0);
    CHECK(vlog.str().find("RESULT: PASS") != std::string::npos);

    // perturb one stored stage coefficient to a different exact value
    fs::path jet = out / "stage-000" / "jet.tsv";
    std::string text = slurp(jet);
    REQUIRE(text.back() == '\n');
    size_t tab = text.rfind('\t');
    REQUIRE(tab != std::string::npos);
    std::string original = text.substr(tab + 1, text.size() - tab - 2);
    std::string replacement = original == "7/9" ? "8/9" : "7/9";
    text = text.substr(0, tab + 1) + replacement + "\n";
    {
        std::ofstream o(jet, std::ios::binary);
        o << text;
    }
    std::ostringstream tlog;
    CHECK(run_verify(out, tlog) == 1);
    CHECK(tlog.str().find("RESULT: FAIL") != std::string::npos);
}

TEST_CASE("mould tables do not depend on the thread cap") {
    PreparedDiffeo f;
    f.nu = 2;
    f.mu = {Scalar(2), Scalar(Rational(1, 2))};
    f.trunc = 4;
    f.h.assign(2, TruncatedPoly{});

    auto dump = [&] {
        std::ostringstream os;
        run_mould(f, "dem", 4, "tsv", os);
        return os.str();
    };
    setenv("MOULDKIT_THREADS", "1", 1);
    std::string serial = dump();
    setenv("MOULDKIT_THREADS", "4", 1);
    std::string parallel = dump();
    unsetenv("MOULDKIT_THREADS");
    CHECK(serial == dump());
    CHECK(serial == parallel);
}

TEST_CASE("normalization runs write byte-identical traces") {
    PreparedDiffeo f = parse_diffeo_spec_text(kMinimalSpec, "mem");
    f.trunc = 4;
    fs::path a = fresh_dir("det-a");
    fs::path b = fresh_dir("det-b");
    std::ostringstream log;
    REQUIRE(run_trim(f, a, log) == 0);
    REQUIRE(run_trim(f, b, log) == 0);

    for (auto it = fs::recursive_directory_iterator(a); it != fs::recursive_directory_iterator();
         ++it) {
        if (!it->is_regular_file())
            continue;
        fs::path rel = fs::relative(it->path(), a);
        CAPTURE(rel.string());
        REQUIRE(fs::exists(b / rel));
        CHECK(slurp(it->path()) == slurp(b / rel));
    }
}
