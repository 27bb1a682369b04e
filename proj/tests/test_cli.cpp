#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "entbat_cli.hpp"

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = entbat::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ENTBAT_DATA_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("entbat_cli_" + name)).string();
}

} // namespace

TEST(CliTest, Measure) {
    auto r = run({"measure", "--measure", "log-negativity", "--state", data("bell.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "1.000000000000\n");
    r = run({"measure", "--measure", "entropy-of-entanglement", "--state", data("maximally_mixed.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("error: applicability: ", 0), 0u) << r.err;
    r = run({"measure", "--measure", "relative-entropy", "--state", data("bell.json"), "--details"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("converged: "), std::string::npos);
    EXPECT_NE(r.out.find("certificate_terms: "), std::string::npos);
}

TEST(CliTest, ValidationError) {
    const auto r = run({"measure", "--measure", "log-negativity", "--state", data("nonpsd.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, "");
    EXPECT_EQ(r.err, "error: validation: min eigenvalue -3.2e-03\n");
}

TEST(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"measure", "--measure", "nope", "--state", data("bell.json")}).code, 2);
    EXPECT_EQ(run({"measure", "--state", data("bell.json")}).code, 2);
    EXPECT_EQ(run({"rate", "--measure", "entropy-of-entanglement", "--from", data("bell.json"), "--to", data("bell.json"),
                   "--restarts", "0"})
                  .code,
              2);
}

TEST(CliTest, HelpExitsZero) {
    for (const std::vector<std::string>& args :
         std::vector<std::vector<std::string>>{{"--help"},
                                               {"measure", "--help"},
                                               {"feasible", "--help"},
                                               {"rate", "--help"},
                                               {"zero-error", "--help"},
                                               {"swap", "--help"},
                                               {"multi-measure", "--help"},
                                               {"continuity-check", "--help"},
                                               {"thermo", "--help"},
                                               {"thermo", "free-energy", "--help"},
                                               {"thermo", "f-max", "--help"},
                                               {"thermo", "feasible", "--help"},
                                               {"thermo", "self-dilution", "--help"},
                                               {"dilution-curve", "--help"},
                                               {"embezzle-demo", "--help"},
                                               {"search-pair", "--help"}}) {
        const auto r = run(args);
        EXPECT_EQ(r.code, 0) << args.front();
        EXPECT_FALSE(r.out.empty()) << args.front();
    }
}

TEST(CliTest, FeasibleAndRate) {
    auto r = run({"feasible", "--measure", "log-negativity", "--from", data("bell.json"), "--to",
                  data("werner_0.9.json")});
    EXPECT_EQ(r.out, "feasible\n");
    r = run({"feasible", "--measure", "log-negativity", "--from", data("werner_0.9.json"), "--to",
             data("bell.json")});
    EXPECT_EQ(r.out, "infeasible\n");
    r = run({"rate", "--measure", "log-negativity", "--from", data("bell_pair_x2.json"), "--to", data("bell.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "rate: 2.000000000000\nm: 2\nn: 1\nepsilon_gap: 0.000000000000\nexact: true\nzero_error: false\n");
    r = run({"rate", "--measure", "entropy-of-entanglement", "--from", data("alpha_pi8.json"), "--to", data("bell.json")});
    EXPECT_NE(r.out.find("exact: false"), std::string::npos) << r.out;
    r = run({"rate", "--measure", "log-negativity", "--from", data("bell.json"), "--to",
             data("maximally_mixed.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("error: unbounded-rate: ", 0), 0u) << r.err;
    r = run({"zero-error", "--measure", "relative-entropy", "--from", data("bell.json"), "--to", data("bell.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("error: applicability: ", 0), 0u) << r.err;
}

TEST(CliTest, Swap) {
    const std::string out = temp_path("swap.json");
    auto r = run({"swap", "--measure", "log-negativity", "--from", data("bell.json"), "--to", data("werner_0.9.json"),
                  "--out", out});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("feasible: true\n", 0), 0u);
    EXPECT_NE(r.out.find("final_system_trace_distance_to_target: 0.000000000000"), std::string::npos) << r.out;
    EXPECT_EQ(entbat::load_state(out).dim(), 16u);
    std::filesystem::remove(out);
    r = run({"swap", "--measure", "log-negativity", "--from", data("werner_0.9.json"), "--to", data("bell.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("error: infeasible: ", 0), 0u) << r.err;
}

TEST(CliTest, Thermo) {
    auto r = run({"thermo", "free-energy", "--state", data("thermo_qubit_gibbs.json"), "--variant", "relative-to-gibbs"});
    EXPECT_EQ(r.out, "0.000000000000\n");
    r = run({"thermo", "free-energy", "--state", data("thermo_qubit_excited.json"), "--variant", "relative-to-gibbs"});
    EXPECT_EQ(r.out, entbat::cli::num(std::log2(1.0 + std::exp(1.0))) + "\n");
    const auto fmax = run({"thermo", "f-max", "--state", data("thermo_qubit_half.json")});
    r = run({"thermo", "free-energy", "--state", data("thermo_qubit_half.json"), "--variant", "renyi", "--alpha", "inf"});
    EXPECT_EQ(r.out, fmax.out);
    EXPECT_EQ(run({"thermo", "free-energy", "--state", data("thermo_qubit_half.json"), "--variant", "renyi"}).code, 1);
    r = run({"thermo", "feasible", "--from", data("thermo_qubit_excited.json"), "--to", data("thermo_qubit_gibbs.json")});
    EXPECT_EQ(r.out, "feasible\n");
    r = run({"thermo", "self-dilution", "--state", data("thermo_qubit_gibbs.json")});
    EXPECT_NE(r.out.find("product: 1.000000000000\nat_gibbs: true"), std::string::npos) << r.out;
    EXPECT_EQ(run({"thermo"}).code, 2);
}

TEST(CliTest, DilutionCurve) {
    auto r = run({"dilution-curve", "--steps", "3"});
    EXPECT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0], "alpha,e_n,e_c,ratio");
    EXPECT_EQ(lines[3], "0.785398163397,1,1,1");

    const std::string out = temp_path("curve.csv");
    r = run({"dilution-curve", "--out", out});
    EXPECT_EQ(r.out, "");
    std::ifstream f(out);
    std::size_t n = 0;
    while (std::getline(f, line)) ++n;
    EXPECT_EQ(n, 201u);
    std::filesystem::remove(out);
    EXPECT_EQ(run({"dilution-curve", "--alpha-max", "1.0"}).code, 1);
}

TEST(CliTest, EmbezzleDemo) {
    const auto r = run({"embezzle-demo", "--d", "2,5,17"});
    EXPECT_EQ(r.out, "d,e_g,entropy,amplification,swap_feasible\n"
                     "2,0.5,1,1,true\n"
                     "5,0.5,2,2,true\n"
                     "17,0.5,3,3,true\n");
}

TEST(CliTest, SearchPairIsDeterministic) {
    const std::vector<std::string> args = {"search-pair", "--measure", "log-negativity", "--measure2", "squashed-upper",
                                           "--seed", "7"};
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("product_bound: "), std::string::npos);
    const auto none = run({"search-pair", "--measure", "entropy-of-entanglement", "--measure2", "entanglement-cost-pure", "--budget", "100"});
    EXPECT_EQ(none.code, 1);
    EXPECT_EQ(none.err.rfind("error: search-exhausted: ", 0), 0u) << none.err;
}

TEST(CliTest, ContinuityCheck) {
    const auto r = run({"continuity-check", "--rho", data("bell.json"), "--sigma", data("werner_0.9.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("holds: true"), std::string::npos) << r.out;
}
