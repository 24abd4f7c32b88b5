// Copyright 2026 anneal-tuner contributors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "anneal/chimera.hpp"
#include "anneal/io.hpp"
#include "anneal/parallel.hpp"
#include "anneal/pipeline.hpp"
#include "anneal/rng.hpp"

namespace {

using namespace anneal;

struct CommonFlags {
    std::string out_dir;
    int threads = 0;
    std::uint64_t seed = 0;
    double epsilon = 2.0;
    SamplerConfig sampler;
    NoiseModel noise;
};

void add_sampler_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--t-a", f.sampler.anneal_time_us, "annealing time per cycle [us]");
    cmd->add_option("--duty", f.sampler.max_duty_us, "max duty time per submission [us]");
    cmd->add_option("--sweeps", f.sampler.sweeps, "Metropolis sweeps per anneal");
    cmd->add_option("--beta-start", f.sampler.beta_start, "initial inverse temperature");
    cmd->add_option("--beta-end", f.sampler.beta_end, "final inverse temperature");
    cmd->add_option_function<std::string>(
           "--schedule",
           [&f](const std::string& v) {
               if (v == "geometric")
                   f.sampler.schedule = BetaSchedule::geometric;
               else if (v == "linear")
                   f.sampler.schedule = BetaSchedule::linear;
               else
                   throw CLI::ValidationError("--schedule", "must be geometric or linear");
           },
           "beta schedule: geometric|linear");
    cmd->add_option("--sigma-h", f.noise.sigma_h, "field control error std dev");
    cmd->add_option("--sigma-j", f.noise.sigma_j, "coupler control error std dev");
    cmd->add_option("--quant", f.noise.quant_step, "coefficient quantization step");
    cmd->add_option("--device-seed", f.noise.device_seed, "simulated device identity");
    cmd->add_option("--seed", f.seed, "master seed");
}

std::vector<double> parse_reals(const std::string& csv, const char* what) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw ValidationError(std::string(what) + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
    return out;
}

std::vector<std::int32_t> parse_ints(const std::string& csv, const char* what) {
    std::vector<std::int32_t> out;
    for (double v : parse_reals(csv, what)) out.push_back(static_cast<std::int32_t>(v));
    return out;
}

// "lo:hi:n" geometric grid, or an explicit comma list
std::vector<double> parse_je_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_reals(text, "--je-grid");
    std::stringstream ss(text);
    std::string lo_s, hi_s, n_s;
    std::getline(ss, lo_s, ':');
    std::getline(ss, hi_s, ':');
    std::getline(ss, n_s, ':');
    double lo = std::stod(lo_s), hi = std::stod(hi_s);
    int n = std::stoi(n_s);
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw ValidationError("--je-grid: need 0 < lo < hi and n >= 2");
    std::vector<double> grid;
    for (int i = 0; i < n; ++i)
        grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return grid;
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

// hardware graph implied by an instance's couplers (for identity embeddings)
HardwareGraph graph_from_instance(const IsingProblem& p) {
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    edges.reserve(p.couplers.size());
    for (const Coupler& c : p.couplers) edges.emplace_back(c.i, c.j);
    return HardwareGraph(p.n, std::move(edges));
}

std::string echo_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

void report(const std::filesystem::path& path) {
    std::cout << "wrote " << path.string() << "\n";
}

std::vector<ScoreRow> score_rows(const GaugeScanResult& scan) {
    const RankTable ranks = scan.elite_ranks();
    std::vector<ScoreRow> rows;
    for (const GaugeScanEntry& e : scan.entries)
        rows.push_back({e.summary.spec_id, e.score.value, true,
                        ranks.rank_of(e.summary.spec_id), e.score.n_reads,
                        e.score.n_reps, e.score.epsilon_percent});
    return rows;
}

int run(int argc, char** argv) {
    CLI::App app{"Elite-mean performance estimation and gauge/J_E tuning "
                 "for annealing-style samplers"};
    app.require_subcommand(1);

    const char* env_out = std::getenv("ANNEAL_TUNER_OUT");
    CommonFlags f;
    f.out_dir = env_out ? env_out : "out";
    app.add_option("--out-dir", f.out_dir, "output directory")->envname("ANNEAL_TUNER_OUT");
    app.add_option("--threads", f.threads, "worker thread cap (0 = all cores)");

    const std::string echo = echo_args(argc, argv);

    // generate ---------------------------------------------------------------
    auto* gen = app.add_subcommand("generate", "build a Chimera graph and a random spin glass on it");
    std::string chimera_dims = "8x8x4", broken_csv, coupling_csv = "-1,1", field_csv = "0";
    gen->add_option("--chimera", chimera_dims, "MxNxL unit-cell grid");
    gen->add_option("--broken", broken_csv, "comma list of broken qubit ids");
    gen->add_option("--coupling-domain", coupling_csv, "coupler value domain");
    gen->add_option("--field-domain", field_csv, "field value domain");
    gen->add_option("--seed", f.seed, "instance seed");

    // sample -----------------------------------------------------------------
    auto* smp = app.add_subcommand("sample", "draw readouts from the noisy annealing backend");
    std::string instance_path, gauge_seed_s;
    smp->add_option("--instance", instance_path, "problem instance file")->required();
    smp->add_option("--gauge-seed", gauge_seed_s, "apply the random gauge with this seed");
    smp->add_option("--n-reads", f.sampler.n_reads, "total readouts");
    add_sampler_flags(smp, f);

    // score ------------------------------------------------------------------
    auto* sco = app.add_subcommand("score", "elite-mean score of a readout file");
    std::string readouts_path;
    bool batched = false;
    sco->add_option("--readouts", readouts_path, "readouts CSV")->required();
    sco->add_option("--epsilon", f.epsilon, "elite percent");
    sco->add_flag("--batched", batched, "average per-batch elite means over the repetitions");
    sco->add_option("--seed", f.seed, "seed recorded in outputs");

    // rank -------------------------------------------------------------------
    auto* rnk = app.add_subcommand("rank", "rank several readout files");
    std::vector<std::string> rank_files;
    std::string rank_method = "elite";
    rnk->add_option("--readouts", rank_files, "readouts CSVs, one per specification")
        ->required()
        ->expected(-1);
    rnk->add_option("--method", rank_method, "elite|greedy");
    rnk->add_option("--epsilon", f.epsilon, "elite percent");
    rnk->add_option("--seed", f.seed, "seed recorded in outputs");

    // je-scan ------------------------------------------------------------
    auto* jes = app.add_subcommand("je-scan", "scan chain-strength candidates");
    std::string emb_path, graph_path, je_grid = "0.5:10:12";
    long long scan_reads = 1000;
    jes->add_option("--instance", instance_path, "logical problem")->required();
    jes->add_option("--embedding", emb_path, "embedding JSON")->required();
    jes->add_option("--graph", graph_path, "hardware graph file")->required();
    jes->add_option("--je-grid", je_grid, "lo:hi:n geometric grid or comma list");
    jes->add_option("--gauge-seed", gauge_seed_s, "gauge under which to scan");
    jes->add_option("--n-reads", scan_reads, "readouts per candidate");
    jes->add_option("--epsilon", f.epsilon, "elite percent");
    add_sampler_flags(jes, f);

    // gauge-scan --------------------------------------------------------
    auto* gsc = app.add_subcommand("gauge-scan", "score a pool of random gauges");
    std::int32_t n_gauges = 100;
    double je_value = 1.0;
    gsc->add_option("--instance", instance_path, "problem instance")->required();
    gsc->add_option("--embedding", emb_path, "embedding JSON (embedded scan)");
    gsc->add_option("--graph", graph_path, "hardware graph (embedded scan)");
    gsc->add_option("--je", je_value, "chain strength for embedded scans");
    gsc->add_option("--n-gauges", n_gauges, "pool size incl. the no-gauge");
    gsc->add_option("--n-reads", scan_reads, "readouts per gauge");
    gsc->add_option("--epsilon", f.epsilon, "elite percent");
    add_sampler_flags(gsc, f);

    // tune ---------------------------------------------------------------
    auto* tun = app.add_subcommand("tune", "iterative J_E and gauge selection");
    long long extensive_reads = 0;
    std::int32_t top_k = 5;
    bool second_scan = false;
    double target_energy = 0.0;
    bool has_target = false;
    tun->add_option("--instance", instance_path, "logical problem")->required();
    tun->add_option("--embedding", emb_path, "embedding JSON (default: identity)");
    tun->add_option("--graph", graph_path, "hardware graph (default: instance graph)");
    tun->add_option("--je-grid", je_grid, "lo:hi:n geometric grid or comma list");
    tun->add_option("--n-gauges", n_gauges, "gauge pool size");
    tun->add_option("--scan-reads", scan_reads, "readouts per specification in scans");
    tun->add_option("--extensive-reads", extensive_reads, "N_total per selected gauge");
    tun->add_option("--top-k", top_k, "gauges to keep for extensive runs");
    tun->add_flag("--second-je-scan", second_scan, "rescan J_E under the best gauge");
    tun->add_option("--target-energy", target_energy, "stop a gauge when this energy is seen")
        ->each([&](const std::string&) { has_target = true; });
    tun->add_option("--epsilon", f.epsilon, "elite percent");
    add_sampler_flags(tun, f);

    // experiment -----------------------------------------------------------
    auto* exp = app.add_subcommand("experiment", "top-k containment fractions vs ground truth");
    std::string reads_grid_s = "500", eps_grid_s = "1,2,5,10";
    std::int32_t n_experiments = 50;
    long long n_total = 50000;
    exp->add_option("--instance", instance_path, "problem instance")->required();
    exp->add_option("--n-gauges", n_gauges, "gauge pool size");
    exp->add_option("--reads-grid", reads_grid_s, "N_reads values, comma list");
    exp->add_option("--eps-grid", eps_grid_s, "elite percents, comma list");
    exp->add_option("--n-experiments", n_experiments, "experiments per N_reads");
    exp->add_option("--n-total", n_total, "ground-truth readouts per gauge");
    exp->add_option("--top-k", top_k, "predicted set size");
    add_sampler_flags(exp, f);

    // correlate ------------------------------------------------------------
    auto* cor = app.add_subcommand("correlate", "positive-coefficient counts vs performance rank");
    cor->add_option("--instance", instance_path, "problem instance")->required();
    cor->add_option("--n-gauges", n_gauges, "gauge pool size");
    cor->add_option("--n-reads", scan_reads, "readouts per gauge (performance rank)");
    cor->add_option("--epsilon", f.epsilon, "elite percent");
    add_sampler_flags(cor, f);

    CLI11_PARSE(app, argc, argv);
    set_max_threads(f.threads);
    ResultStore store{f.out_dir};

    auto scan_settings = [&](long long reads) {
        ScanSettings s;
        s.reads_per_spec = reads;
        s.epsilon_percent = f.epsilon;
        s.sampler = f.sampler;
        s.noise = f.noise;
        return s;
    };

    if (gen->parsed()) {
        ChimeraSpec spec;
        if (std::sscanf(chimera_dims.c_str(), "%dx%dx%d", &spec.rows, &spec.cols,
                        &spec.shore) != 3)
            throw ValidationError("--chimera: expected MxNxL");
        if (!broken_csv.empty()) spec.broken = parse_ints(broken_csv, "--broken");
        const HardwareGraph graph = build_chimera(spec);
        const IsingProblem p = random_spin_glass(
            graph, parse_reals(coupling_csv, "--coupling-domain"),
            parse_reals(field_csv, "--field-domain"), f.seed);
        report(store.emit("reports", "generate-graph", f.seed, "txt",
                          write_graph(graph), echo));
        report(store.emit("reports", "generate", f.seed, "txt",
                          write_instance(p, {"chimera " + chimera_dims,
                                             "coupling domain " + coupling_csv,
                                             "field domain " + field_csv,
                                             "seed " + std::to_string(f.seed)}),
                          echo));
        report(store.emit("reports", "generate", f.seed, "json",
                          write_instance_json(p), echo));
        return 0;
    }

    if (smp->parsed()) {
        IsingProblem p = read_instance_file(instance_path);
        Gauge gauge = Gauge::identity(static_cast<std::size_t>(p.n));
        if (!gauge_seed_s.empty())
            gauge = random_gauge(p.n, std::stoull(gauge_seed_s));
        f.sampler.seed = f.seed;
        const ReadoutSet reads = sample(apply_gauge(p, gauge), f.sampler, f.noise);
        report(store.emit("readouts", "sample", f.seed, "csv",
                          write_readouts_csv(reads), echo));
        report(store.emit("readouts", "sample-meta", f.seed, "json",
                          write_readouts_meta(reads, f.sampler, f.noise), echo));
        return 0;
    }

    if (sco->parsed()) {
        const ReadoutsFile file = read_readouts_file(readouts_path);
        EliteScore score;
        if (batched) {
            score = elite_score_batched(file.as_batches(), f.epsilon);
        } else {
            EnergyBatch all{file.energies, 0};
            score = elite_mean(all, f.epsilon);
        }
        std::vector<ScoreRow> rows{{stem_of(readouts_path), score.value, true, 1,
                                    score.n_reads, score.n_reps,
                                    score.epsilon_percent}};
        report(store.emit("scores", "score", f.seed, "csv", write_scores_csv(rows),
                          echo));
        return 0;
    }

    if (rnk->parsed()) {
        std::vector<ScoreRow> rows;
        if (rank_method == "elite") {
            std::vector<std::pair<std::string, EliteScore>> scores;
            for (const std::string& path : rank_files)
                scores.emplace_back(
                    stem_of(path),
                    elite_score_batched(read_readouts_file(path).as_batches(),
                                        f.epsilon));
            const RankTable table = estimator_rank(scores);
            for (const RankedSpec& e : table.entries) {
                const auto& s = scores[0].second;
                rows.push_back({e.spec_id, e.score, true, e.rank, s.n_reads,
                                s.n_reps, f.epsilon});
            }
        } else if (rank_method == "greedy") {
            std::vector<SpecSummary> summaries;
            long long reads = 0;
            for (const std::string& path : rank_files) {
                const ReadoutsFile file = read_readouts_file(path);
                reads = static_cast<long long>(file.energies.size());
                summaries.push_back(summarize(stem_of(path), file.energies));
            }
            const RankTable table = greedy_rank(summaries);
            for (const RankedSpec& e : table.entries)
                rows.push_back({e.spec_id, 0.0, false, e.rank, reads, 1, 0.0});
        } else {
            throw ValidationError("rank: --method must be elite or greedy");
        }
        report(store.emit("ranks", "rank", f.seed, "csv", write_scores_csv(rows),
                          echo));
        return 0;
    }

    if (jes->parsed()) {
        const IsingProblem logical = read_instance_file(instance_path);
        const Embedding emb = read_embedding_file(emb_path);
        const HardwareGraph graph = read_graph_file(graph_path);
        Gauge gauge = Gauge::identity(static_cast<std::size_t>(graph.id_bound()));
        if (!gauge_seed_s.empty())
            gauge = random_gauge(graph.id_bound(), std::stoull(gauge_seed_s));
        const JeScanResult result =
            je_scan(logical, emb, graph, parse_je_grid(je_grid), gauge,
                    scan_settings(scan_reads), f.seed);
        report(store.emit("scores", "je-scan", f.seed, "csv",
                          write_je_curve_csv(result.points), echo));
        return 0;
    }

    if (gsc->parsed()) {
        const IsingProblem p = read_instance_file(instance_path);
        GaugeScanResult scan;
        if (!emb_path.empty()) {
            if (graph_path.empty())
                throw ValidationError("gauge-scan: --embedding requires --graph");
            const EmbeddedProblem ep =
                embed(p, read_embedding_file(emb_path),
                      read_graph_file(graph_path), je_value);
            scan = gauge_scan(ep, n_gauges, scan_settings(scan_reads), f.seed);
        } else {
            scan = gauge_scan(p, n_gauges, scan_settings(scan_reads), f.seed);
        }
        report(store.emit("ranks", "gauge-scan", f.seed, "csv",
                          write_gauge_csv(scan), echo));
        report(store.emit("scores", "gauge-scan", f.seed, "csv",
                          write_scores_csv(score_rows(scan)), echo));
        return 0;
    }

    if (tun->parsed()) {
        const IsingProblem logical = read_instance_file(instance_path);
        const HardwareGraph graph = graph_path.empty()
                                        ? graph_from_instance(logical)
                                        : read_graph_file(graph_path);
        const Embedding emb = emb_path.empty() ? Embedding::identity(graph)
                                               : read_embedding_file(emb_path);
        TuneBudgets budgets;
        budgets.scan_reads = scan_reads;
        budgets.extensive_reads = extensive_reads;
        budgets.top_k = top_k;
        const TuneReport result = iterative_tune(
            logical, emb, graph, parse_je_grid(je_grid), n_gauges, budgets,
            scan_settings(scan_reads), f.seed, second_scan,
            has_target ? std::optional<double>(target_energy) : std::nullopt);
        report(store.emit("reports", "tune", f.seed, "json",
                          tune_report_json(result), echo));
        report(store.emit("scores", "tune-je-curve", f.seed, "csv",
                          write_je_curve_csv(result.je_curve), echo));
        return 0;
    }

    if (exp->parsed()) {
        const IsingProblem p = read_instance_file(instance_path);
        std::vector<long long> reads_grid;
        for (double v : parse_reals(reads_grid_s, "--reads-grid"))
            reads_grid.push_back(static_cast<long long>(v));
        const ContainmentTable table = containment_experiment(
            p, n_gauges, reads_grid, parse_reals(eps_grid_s, "--eps-grid"),
            n_experiments, n_total, scan_settings(scan_reads), f.seed, top_k);
        report(store.emit("reports", "experiment", f.seed, "json",
                          containment_json(table), echo));
        report(store.emit("reports", "experiment", f.seed, "csv",
                          write_containment_csv(table), echo));
        return 0;
    }

    if (cor->parsed()) {
        const IsingProblem p = read_instance_file(instance_path);
        const GaugeScanResult scan =
            gauge_scan(p, n_gauges, scan_settings(scan_reads), f.seed);
        const std::vector<CouplerCorrelation> rows =
            correlate_positive_couplers(scan, scan.greedy_ranks());
        report(store.emit("reports", "correlate", f.seed, "csv",
                          write_correlation_csv(rows), echo));
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const anneal::ValidationError& e) {
        nlohmann::json err{{"error", e.what()}, {"kind", "validation"}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", e.what()}, {"kind", "internal"}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
}
