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

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anneal/embedding.hpp"
#include "anneal/estimator.hpp"
#include "anneal/sampler.hpp"

namespace anneal {

/// Shared settings for one scan: every specification is sampled with the
/// same read budget, epsilon and sampler/noise configuration.
struct ScanSettings {
    long long reads_per_spec = 1000;
    double epsilon_percent = 2.0;
    SamplerConfig sampler;
    NoiseModel noise;
};

std::string gauge_spec_id(std::int32_t gauge_id);

struct GaugeScanEntry {
    std::int32_t gauge_id = 0;
    Gauge gauge;
    EliteScore score;       // logical/clean frame
    SpecSummary summary;    // clean-frame energy histogram of the scan reads
    PositiveCounts counts;  // sign counts of the programmed (gauged) problem
    std::optional<double> f_se;               // embedded scans only
    std::optional<EliteScore> problem_score;  // E_problem frame (ancilla case)
    std::optional<SpecSummary> problem_summary;
};

struct GaugeScanResult {
    std::vector<GaugeScanEntry> entries;
    long long reads_per_gauge = 0;
    double epsilon_percent = 0.0;
    std::int32_t n_reps = 1;
    long long sampler_calls = 0;  // one per gauge: scoring adds no sampling
    long long batches_run = 0;    // n_gauges * n_reps

    RankTable elite_ranks() const;
    RankTable greedy_ranks() const;
    RankTable problem_elite_ranks() const;
    RankTable problem_greedy_ranks() const;
    const GaugeScanEntry& by_id(std::int32_t gauge_id) const;
};

/// The gauge pool used by every scan: id 0 is the identity ("no-gauge"),
/// ids 1..n_gauges-1 are random sign vectors derived from `seed`. Scans of
/// the same pool (e.g. a cheap estimator scan and a long ground-truth run)
/// must be given the same pool seed.
std::vector<Gauge> scan_gauges(std::int32_t n_gauges, std::int32_t n,
                               std::uint64_t seed);

/// Score n_gauges spin-reversal transforms of `problem` (gauge 0 is always
/// the identity "no-gauge"). Each gauge is sampled once; elite scores and
/// greedy histograms are both computed from those same reads.
GaugeScanResult gauge_scan(const IsingProblem& problem, std::int32_t n_gauges,
                           const ScanSettings& settings, std::uint64_t seed);

/// Scan an explicit gauge pool; `sample_seed` drives only the sampling.
GaugeScanResult gauge_scan(const IsingProblem& problem,
                           const std::vector<Gauge>& gauges,
                           const ScanSettings& settings,
                           std::uint64_t sample_seed);

/// Embedded variant: readouts are ungauged, checked for strict embedding,
/// majority-vote decoded, and scored on the logical (E_QUBO) energies.
/// When the logical QUBO carries a variable partition, problem-frame scores
/// and histograms are produced as well.
GaugeScanResult gauge_scan(const EmbeddedProblem& problem, std::int32_t n_gauges,
                           const ScanSettings& settings, std::uint64_t seed);
GaugeScanResult gauge_scan(const EmbeddedProblem& problem,
                           const std::vector<Gauge>& gauges,
                           const ScanSettings& settings,
                           std::uint64_t sample_seed);

struct JeScanPoint {
    double je = 0.0;
    EliteScore score;  // elite mean on decoded E_QUBO energies
    double f_se = 0.0;
    double scale = 1.0;
};

struct JeScanResult {
    std::vector<JeScanPoint> points;  // ascending J_E

    std::vector<JePoint> fse_curve() const;
    double best_je() const;  // argmax score (smallest J_E on ties)
};

/// Scan candidate chain strengths under one fixed gauge. Scores use the
/// decoded logical frame so they stay comparable across J_E (device-frame
/// energies change with the renormalization scale); f_SE is measured on the
/// raw (undecoded) hardware reads.
JeScanResult je_scan(const IsingProblem& logical, const Embedding& emb,
                     const HardwareGraph& graph,
                     const std::vector<double>& je_candidates, const Gauge& gauge,
                     const ScanSettings& settings, std::uint64_t seed);
JeScanResult je_scan(const Qubo& logical, const Embedding& emb,
                     const HardwareGraph& graph,
                     const std::vector<double>& je_candidates, const Gauge& gauge,
                     const ScanSettings& settings, std::uint64_t seed);

enum class RankMethod { elite, greedy };

std::vector<std::int32_t> select_top_k(const GaugeScanResult& result,
                                       std::int32_t k, RankMethod method);

/// Union of the elite top-k and greedy top-k, both ranked on the
/// problem-frame (E_problem) data. Requires a partitioned logical QUBO scan.
std::vector<std::int32_t> union_top_selection(const GaugeScanResult& result,
                                              std::int32_t k);

struct TuneBudgets {
    long long scan_reads = 1000;       // N_reads per specification in scans
    long long extensive_reads = 0;     // N_total per selected gauge (0 = scan only)
    std::int32_t top_k = 5;
};

struct ExtensiveStat {
    std::int32_t gauge_id = 0;
    long long reads_used = 0;
    long long n_gs = 0;
    double p_s = 0.0;
    std::optional<long long> r99_reps;
    double best_energy = 0.0;
};

struct GaugeScore {
    std::int32_t gauge_id = 0;
    double score = 0.0;
    long long n_gs_scan = 0;  // hits at the best energy seen in the scan
};

struct TuneReport {
    double f_max = 0.0;
    JeRegion region;
    double chosen_je = 0.0;
    std::vector<JeScanPoint> je_curve;
    std::vector<GaugeScore> scan_scores;        // every scanned gauge
    std::vector<std::int32_t> selected_gauges;  // ids, best first
    std::optional<double> second_je;
    bool extensive = false;  // false = scan data only (degenerate budget)
    double reference_energy = 0.0;
    std::vector<ExtensiveStat> extensive_stats;
};

/// The iterative strategy: measure f_max at J_E = 10, scan J_E under the
/// identity gauge restricted to [J*_E, J**_E], pick the best-scoring
/// candidate, run a gauge scan there, optionally rescan J_E under the best
/// gauge, then run the extensive budget on the selected top gauges and
/// report n_gs / p_s / R.99 per gauge. `target_energy`, when given, stops a
/// gauge's extensive run as soon as a read reaches it.
TuneReport iterative_tune(const IsingProblem& logical, const Embedding& emb,
                          const HardwareGraph& graph,
                          const std::vector<double>& je_candidates,
                          std::int32_t n_gauges, const TuneBudgets& budgets,
                          const ScanSettings& settings, std::uint64_t seed,
                          bool second_je_scan = false,
                          std::optional<double> target_energy = std::nullopt);
TuneReport iterative_tune(const Qubo& logical, const Embedding& emb,
                          const HardwareGraph& graph,
                          const std::vector<double>& je_candidates,
                          std::int32_t n_gauges, const TuneBudgets& budgets,
                          const ScanSettings& settings, std::uint64_t seed,
                          bool second_je_scan = false,
                          std::optional<double> target_energy = std::nullopt);

/// Default candidate grid: 12 geometric points over [0.5, 10].
std::vector<double> default_je_candidates();

struct ContainmentRow {
    std::string method;  // "greedy" or "eps<value>"
    long long n_reads = 0;
    std::vector<double> fractions;  // any-top-m hit rate, m = 1..top_k
};

struct ContainmentTable {
    std::int32_t n_gauges = 0;
    std::int32_t top_k = 5;
    long long n_total = 0;
    std::int32_t n_experiments = 0;
    std::vector<ContainmentRow> rows;

    const ContainmentRow& row(const std::string& method, long long n_reads) const;
};

/// Table-style experiment: fix the gauge set, establish ground-truth ranks
/// from N_total reads per gauge, then repeat cheap scans with fresh readout
/// randomness and record how often each method's predicted top-k contains
/// the true top-1, any of the true top-2, ... any of the true top-k.
ContainmentTable containment_experiment(const IsingProblem& problem,
                                        std::int32_t n_gauges,
                                        const std::vector<long long>& reads_grid,
                                        const std::vector<double>& eps_grid,
                                        std::int32_t n_experiments,
                                        long long n_total,
                                        const ScanSettings& settings,
                                        std::uint64_t seed,
                                        std::int32_t top_k = 5);

struct CouplerCorrelation {
    std::string count_type;  // j_positive, nonchain_j_positive, chain_j_positive, h_positive
    double rho = 0.0;
    bool degenerate = false;
};

/// Spearman correlation between per-gauge positive-coefficient counts and
/// the performance rank (lower rank = better). Degenerate count vectors
/// (all gauges equal) report rho = 0 with the flag set.
std::vector<CouplerCorrelation> correlate_positive_couplers(
    const GaugeScanResult& scan, const RankTable& performance);

}  // namespace anneal
