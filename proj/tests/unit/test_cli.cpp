#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ebfdr/io.hpp"
#include "ebfdr/simulation.hpp"
#include "ebfdr_cli/cli.hpp"

using namespace ebfdr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("ebfdr_cli_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Outcome {
    int status;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    return lines;
}

std::string pvalue_csv(std::size_t n, std::uint64_t seed) {
    ScenarioSpec spec;
    spec.n = n;
    spec.seed = seed;
    const auto inst = gen_scenario(spec);
    std::string text = "pvalue\n";
    for (double p : inst.pvalues) text += format_double(p) + "\n";
    return text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("fit then control keeps one row per input") {
    TempDir dir;
    write_text(dir.file("p.csv"), pvalue_csv(5000, 1));
    const auto fit = run({"fit", "--in", dir.file("p.csv"), "--out", dir.file("m.json")});
    REQUIRE(fit.status == 0);
    CHECK(fit.err.empty());
    const auto model = read_model(dir.file("m.json"));
    CHECK(model.n_total == 5000);
    CHECK(model.params.pi0 > 0.5);

    const auto ctl = run({"control", "--in", dir.file("p.csv"), "--model", dir.file("m.json"), "--beta", "0.1"});
    REQUIRE(ctl.status == 0);
    const auto lines = data_lines(ctl.out);
    REQUIRE(lines.size() == 5001);
    CHECK(lines[0] == "index,pvalue,zscore,tau,rejected");
    CHECK(lines[1].rfind("0,", 0) == 0);
    CHECK(lines[5000].rfind("4999,", 0) == 0);

    // in-line fit gives the same decisions as the two-step pipeline
    const auto inline_ctl = run({"control", "--in", dir.file("p.csv"), "--beta", "0.1"});
    REQUIRE(inline_ctl.status == 0);
    CHECK(data_lines(inline_ctl.out) == lines);
}

TEST_CASE("encode") {
    TempDir dir;
    write_text(dir.file("p.csv"), "pvalue\n0.25\n0.0001\n0.9999\n");
    const auto p8 = run({"encode", "--in", dir.file("p.csv"), "--scheme", "p8"});
    REQUIRE(p8.status == 0);
    CHECK(data_lines(p8.out) == std::vector<std::string>{"pvalue", format_double(64.0 / 255.0), "0", "1"});

    write_text(dir.file("t.csv"), "tstat\n2\n-4\n1\n");
    const auto t7 = run({"encode", "--in", dir.file("t.csv"), "--scheme", "t7"});
    REQUIRE(t7.status == 0);
    const auto lines = data_lines(t7.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[2] == "-4");
    CHECK(t7.out.find("max_abs=4") != std::string::npos);
}

TEST_CASE("outputs are identical across runs and worker counts") {
    const std::vector<std::string> sim{"simulate", "--n",         "5000",      "--reps",      "4",
                                       "--seed",   "42",          "--encodings", "none,p8,t7", "--methods",
                                       "eb,bh,by,qvalue"};
    auto w1 = sim;
    w1.insert(w1.end(), {"--workers", "1"});
    auto w3 = sim;
    w3.insert(w3.end(), {"--workers", "3"});
    const auto a = run(w1), b = run(w1), c = run(w3);
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out.find("seed=42") != std::string::npos);
    CHECK(data_lines(a.out).size() == 1 + 3 * 4 * 2);

    const std::vector<std::string> nul{"null-study", "--n", "20000", "--reps", "3", "--encodings", "none,p8,t8"};
    auto n1 = nul;
    n1.insert(n1.end(), {"--workers", "1"});
    auto n2 = nul;
    n2.insert(n2.end(), {"--workers", "2"});
    CHECK(run(n1).out == run(n2).out);

    const std::vector<std::string> mix{"mixture-study", "--n", "20000", "--reps", "3", "--encodings", "none,t16"};
    auto m1 = mix;
    m1.insert(m1.end(), {"--workers", "1"});
    auto m2 = mix;
    m2.insert(m2.end(), {"--workers", "2"});
    const auto ma = run(m1);
    REQUIRE(ma.status == 0);
    CHECK(ma.out == run(m2).out);
}

TEST_CASE("errors go to the error stream only") {
    TempDir dir;
    write_text(dir.file("p.csv"), "0.1\n0.2\nbad\n");
    write_text(dir.file("ok.csv"), pvalue_csv(500, 2));
    const std::vector<std::vector<std::string>> cases{
        {},
        {"frobnicate"},
        {"encode", "--in", dir.file("ok.csv"), "--scheme", "p10"},
        {"encode", "--in", dir.file("ok.csv"), "--scheme", "p8", "--pvalues"},
        {"control", "--in", dir.file("ok.csv"), "--beta", "1.5"},
        {"control", "--in", dir.file("ok.csv"), "--beta", "0"},
        {"control", "--in", dir.file("ok.csv"), "--beta", "0.1", "--model", dir.file("m.json"), "--bin-rule", "fd"},
        {"control", "--in", dir.file("p.csv"), "--beta", "0.1"},
        {"fit", "--in", dir.file("missing.csv")},
        {"fit", "--in", dir.file("ok.csv"), "--bin-rule", "magic"},
        {"fit", "--in", dir.file("ok.csv"), "--tol", "-1"},
        {"simulate", "--scenario", "s9"},
        {"simulate", "--reps", "0"},
        {"simulate", "--pi0", "1"},
        {"null-study", "--encodings", "q8"},
    };
    for (const auto& args : cases) {
        const auto r = run(args);
        const std::string label = args.empty() ? std::string("<none>") : args[0];
        INFO(label);
        CHECK(r.status != 0);
        CHECK(r.out.empty());
        CHECK(r.err.rfind("error: ", 0) == 0);
        CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    }
    CHECK(run({"control", "--in", dir.file("p.csv"), "--beta", "0.1"}).err.find("line 3") != std::string::npos);
}

}  // TEST_SUITE
