#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anneal/chimera.hpp"
#include "anneal/io.hpp"
#include "anneal/rng.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace anneal;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::vector<fs::path> artifacts;
};

RunResult run_cli(const std::string& args) {
    RunResult r;
    const std::string cmd = std::string(ANNEAL_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[512];
    while (fgets(buf, sizeof(buf), pipe)) r.out += buf;
    r.exit_code = WEXITSTATUS(pclose(pipe));
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind("wrote ", 0) == 0) r.artifacts.emplace_back(line.substr(6));
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("anneal-test-" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("instance text format round-trips bit-exactly") {
    HardwareGraph g = build_chimera({1, 2, 4, {3}});
    IsingProblem p = random_spin_glass(g, {+0.3333333333333333, -1.0}, {0.125}, 9);
    p.offset = -0.7071067811865476;
    const std::string text = write_instance(p, {"round trip fixture"});
    std::istringstream in(text);
    IsingProblem back = read_instance(in);
    CHECK(back.n == p.n);
    CHECK(back.offset == p.offset);
    REQUIRE(back.couplers.size() == p.couplers.size());
    for (std::size_t k = 0; k < p.couplers.size(); ++k) {
        CHECK(back.couplers[k].i == p.couplers[k].i);
        CHECK(back.couplers[k].j == p.couplers[k].j);
        CHECK(back.couplers[k].value == p.couplers[k].value);
    }
    for (std::int32_t i = 0; i < p.n; ++i) CHECK(back.h[i] == p.h[i]);
}

TEST_CASE("the JSON mirror parses to the same problem") {
    HardwareGraph g = build_chimera({1, 1, 4, {}});
    IsingProblem p = random_spin_glass(g, {+1.0, -1.0}, {0.5}, 10);
    std::istringstream in(write_instance_json(p));
    IsingProblem back = read_instance(in);
    CHECK(back.n == p.n);
    for (std::int32_t i = 0; i < p.n; ++i) CHECK(back.h[i] == p.h[i]);
    for (std::size_t k = 0; k < p.couplers.size(); ++k)
        CHECK(back.couplers[k].value == p.couplers[k].value);

    std::istringstream bad("p spam 1 0 0 0");
    CHECK_THROWS_AS(read_instance(bad), ValidationError);
}

TEST_CASE("graph files round-trip") {
    HardwareGraph g = build_chimera({2, 3, 4, {5, 17}});
    std::istringstream in(write_graph(g));
    HardwareGraph back = read_graph(in);
    CHECK(back.node_count() == g.node_count());
    CHECK(back.edges() == g.edges());
    REQUIRE(back.chimera.has_value());
    CHECK(back.chimera->broken == g.chimera->broken);
}

TEST_CASE("embedding JSON round-trips") {
    fixtures::PairChains fx;
    std::istringstream in(write_embedding(fx.embedding));
    Embedding back = read_embedding(in);
    CHECK(back.chains == fx.embedding.chains);

    std::istringstream missing("{\"0\": [1], \"2\": [3]}");
    CHECK_THROWS_AS(read_embedding(missing), ValidationError);
}

TEST_CASE("readout CSVs round-trip through batches") {
    HardwareGraph g = build_chimera({1, 1, 4, {}});
    IsingProblem p = fixtures::random_glass(g, 12);
    SamplerConfig cfg;
    cfg.n_reads = 40;
    cfg.anneal_time_us = 100000.0;  // 10 reads per batch
    cfg.sweeps = 5;
    cfg.seed = 77;
    ReadoutSet reads = sample(p, cfg, NoiseModel{});
    std::istringstream in(write_readouts_csv(reads));
    ReadoutsFile file = read_readouts_csv(in);
    REQUIRE(file.energies.size() == 40);
    CHECK(file.spins[7].values == reads.configs[7].values);
    CHECK(file.energies[13] == reads.device_energies[13]);
    std::vector<EnergyBatch> batches = file.as_batches();
    REQUIRE(batches.size() == 4);
    CHECK(batches[3].energies.size() == 10);
}

TEST_CASE("score CSV layout") {
    std::vector<ScoreRow> rows{{"g0001", 4.5, true, 1, 5, 1, 40.0},
                               {"g0002", 0.0, false, 2, 5, 1, 0.0}};
    const std::string csv = write_scores_csv(rows);
    CHECK(csv == "spec_id,score,rank,n_reads,n_reps,epsilon\n"
                 "g0001,4.5,1,5,1,40\n"
                 "g0002,,2,5,1,0\n");
}

TEST_CASE("CLI: score on the five-energy fixture returns 4.5") {
    fs::path dir = fresh_dir("score");
    fs::path readouts = dir / "fixture.csv";
    {
        std::ofstream out(readouts);
        out << "batch,read,energy_device,spins\n";
        int i = 0;
        for (double e : {-5.0, -4.0, -3.0, -2.0, -1.0})
            out << "0," << i++ << "," << e << ",+\n";
    }
    RunResult r = run_cli("--out-dir " + (dir / "out").string() +
                          " score --readouts " + readouts.string() +
                          " --epsilon 40");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.artifacts.size() == 1);
    const std::string csv = slurp(r.artifacts[0]);
    CHECK(csv.find("fixture,4.5,1,5,1,40") != std::string::npos);
}

TEST_CASE("CLI: identical flags produce byte-identical artifacts") {
    fs::path dir = fresh_dir("determinism");
    auto run_once = [&](const std::string& sub) {
        fs::path out = dir / sub;
        RunResult gen = run_cli("--out-dir " + out.string() +
                                " generate --chimera 2x2x4 --seed 11");
        REQUIRE(gen.exit_code == 0);
        REQUIRE(gen.artifacts.size() == 3);
        RunResult smp = run_cli(
            "--out-dir " + out.string() + " sample --instance " +
            gen.artifacts[1].string() +
            " --n-reads 120 --sweeps 6 --sigma-j 0.05 --device-seed 3 --seed 21");
        REQUIRE(smp.exit_code == 0);
        return std::make_pair(gen.artifacts, smp.artifacts);
    };
    auto [gen1, smp1] = run_once("a");
    auto [gen2, smp2] = run_once("b");
    for (std::size_t i = 0; i < gen1.size(); ++i)
        CHECK(slurp(gen1[i]) == slurp(gen2[i]));
    for (std::size_t i = 0; i < smp1.size(); ++i)
        CHECK(slurp(smp1[i]) == slurp(smp2[i]));
}

TEST_CASE("CLI: tune output matches the library call field for field") {
    fs::path dir = fresh_dir("tune-equiv");
    RunResult gen =
        run_cli("--out-dir " + (dir / "out").string() +
                " generate --chimera 1x2x4 --seed 31");
    REQUIRE(gen.exit_code == 0);
    const fs::path instance = gen.artifacts[1];
    RunResult tune = run_cli(
        "--out-dir " + (dir / "out").string() + " tune --instance " +
        instance.string() +
        " --je-grid 0.5,1,2 --n-gauges 4 --scan-reads 80 --extensive-reads 320"
        " --top-k 2 --sweeps 6 --sigma-j 0.05 --device-seed 8 --seed 77");
    REQUIRE(tune.exit_code == 0);
    REQUIRE(tune.artifacts.size() == 2);

    IsingProblem logical = read_instance_file(instance);
    HardwareGraph graph = [&logical] {
        std::vector<std::pair<std::int32_t, std::int32_t>> edges;
        for (const Coupler& c : logical.couplers) edges.emplace_back(c.i, c.j);
        return HardwareGraph(logical.n, std::move(edges));
    }();
    ScanSettings settings;
    settings.reads_per_spec = 80;
    settings.epsilon_percent = 2.0;
    settings.sampler.sweeps = 6;
    settings.noise.sigma_j = 0.05;
    settings.noise.device_seed = 8;
    TuneBudgets budgets;
    budgets.scan_reads = 80;
    budgets.extensive_reads = 320;
    budgets.top_k = 2;
    TuneReport expected =
        iterative_tune(logical, Embedding::identity(graph), graph,
                       {0.5, 1.0, 2.0}, 4, budgets, settings, 77);
    CHECK(slurp(tune.artifacts[0]) == tune_report_json(expected));
}

TEST_CASE("CLI: validation failures exit with code 1") {
    fs::path dir = fresh_dir("errors");
    RunResult missing = run_cli("--out-dir " + (dir / "out").string() +
                                " sample --instance /nonexistent.txt");
    CHECK(missing.exit_code == 1);
    RunResult bad_broken = run_cli("--out-dir " + (dir / "out").string() +
                                   " generate --chimera 2x2x4 --broken 999");
    CHECK(bad_broken.exit_code == 1);
}

TEST_CASE("CLI: ANNEAL_TUNER_OUT is honored when --out-dir is absent") {
    fs::path dir = fresh_dir("envvar");
    const std::string cmd = "ANNEAL_TUNER_OUT=" + (dir / "env-out").string() +
                            " " + ANNEAL_CLI_PATH +
                            " generate --chimera 1x1x4 --seed 2 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[256];
    while (fgets(buf, sizeof(buf), pipe)) {
    }
    CHECK(WEXITSTATUS(pclose(pipe)) == 0);
    CHECK(fs::exists(dir / "env-out" / "manifest.json"));
}

TEST_CASE("manifest records reproducible content hashes") {
    fs::path dir = fresh_dir("manifest");
    RunResult gen = run_cli("--out-dir " + (dir / "out").string() +
                            " generate --chimera 1x2x4 --seed 4");
    REQUIRE(gen.exit_code == 0);
    const std::string manifest = slurp(dir / "out" / "manifest.json");
    for (const fs::path& artifact : gen.artifacts) {
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(content_fnv(slurp(artifact))));
        CHECK(manifest.find(hex) != std::string::npos);
    }
}
