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

#include "anneal/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>

#include "anneal/parallel.hpp"
#include "anneal/rng.hpp"

namespace anneal {

std::string gauge_spec_id(std::int32_t gauge_id) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "g%04d", gauge_id);
    return buf;
}

std::vector<Gauge> scan_gauges(std::int32_t n_gauges, std::int32_t n,
                               std::uint64_t seed) {
    if (n_gauges < 1) throw ValidationError("scan_gauges: need at least 1 gauge");
    std::vector<Gauge> gauges;
    gauges.reserve(static_cast<std::size_t>(n_gauges));
    gauges.push_back(Gauge::identity(static_cast<std::size_t>(n)));  // no-gauge
    for (std::int32_t i = 1; i < n_gauges; ++i)
        gauges.push_back(random_gauge(n, seed_mix(seed, "gauge", i)));
    return gauges;
}

namespace {

long long count_at(const SpecSummary& s, double rounded_energy) {
    auto it = s.histogram.find(rounded_energy);
    return it == s.histogram.end() ? 0 : it->second;
}

struct DecodeOutcome {
    std::vector<EnergyBatch> logical_batches;
    std::vector<EnergyBatch> problem_batches;  // empty unless partitioned
    SEReport se;
};

DecodeOutcome decode_reads(const ReadoutSet& reads, const EmbeddedProblem& ep,
                           const Gauge& gauge, std::uint64_t tie_master) {
    const bool partitioned =
        ep.logical_qubo && ep.logical_qubo->has_partition();
    DecodeOutcome out;
    out.logical_batches.resize(static_cast<std::size_t>(reads.n_reps));
    if (partitioned)
        out.problem_batches.resize(static_cast<std::size_t>(reads.n_reps));
    for (std::int32_t b = 0; b < reads.n_reps; ++b) {
        out.logical_batches[b].batch_index = b;
        out.logical_batches[b].energies.resize(
            static_cast<std::size_t>(reads.reads_per_batch));
        if (partitioned) {
            out.problem_batches[b].batch_index = b;
            out.problem_batches[b].energies.resize(
                static_cast<std::size_t>(reads.reads_per_batch));
        }
    }
    const std::size_t n = static_cast<std::size_t>(reads.n_reads());
    out.se.passed.assign(n, false);
    std::vector<std::uint8_t> pass(n, 0);
    parallel_for(n, [&](std::size_t i) {
        const SpinConfig clean = ungauge(reads.configs[i], gauge);
        pass[i] = chains_aligned(clean, ep.embedding) ? 1 : 0;
        const SpinConfig logical = majority_vote_decode(
            clean, ep.embedding, seed_mix(tie_master, "tie", i));
        const std::int32_t b = reads.batch_of(static_cast<long long>(i));
        const std::size_t w = i - static_cast<std::size_t>(b) *
                                      static_cast<std::size_t>(reads.reads_per_batch);
        out.logical_batches[b].energies[w] = logical_energy(ep, logical);
        if (partitioned)
            out.problem_batches[b].energies[w] = logical_problem_energy(ep, logical);
    });
    std::size_t passing = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.se.passed[i] = pass[i] != 0;
        if (pass[i]) ++passing;
    }
    out.se.f_se = static_cast<double>(passing) / static_cast<double>(n);
    return out;
}

}  // namespace

RankTable GaugeScanResult::elite_ranks() const {
    std::vector<std::pair<std::string, EliteScore>> scores;
    scores.reserve(entries.size());
    for (const GaugeScanEntry& e : entries)
        scores.emplace_back(e.summary.spec_id, e.score);
    return estimator_rank(scores);
}

RankTable GaugeScanResult::greedy_ranks() const {
    std::vector<SpecSummary> s;
    s.reserve(entries.size());
    for (const GaugeScanEntry& e : entries) s.push_back(e.summary);
    return greedy_rank(s);
}

RankTable GaugeScanResult::problem_elite_ranks() const {
    std::vector<std::pair<std::string, EliteScore>> scores;
    for (const GaugeScanEntry& e : entries) {
        if (!e.problem_score)
            throw ValidationError("scan carries no problem-frame scores");
        scores.emplace_back(e.summary.spec_id, *e.problem_score);
    }
    return estimator_rank(scores);
}

RankTable GaugeScanResult::problem_greedy_ranks() const {
    std::vector<SpecSummary> s;
    for (const GaugeScanEntry& e : entries) {
        if (!e.problem_summary)
            throw ValidationError("scan carries no problem-frame summaries");
        s.push_back(*e.problem_summary);
    }
    return greedy_rank(s);
}

const GaugeScanEntry& GaugeScanResult::by_id(std::int32_t gauge_id) const {
    for (const GaugeScanEntry& e : entries)
        if (e.gauge_id == gauge_id) return e;
    throw ValidationError("scan: unknown gauge id " + std::to_string(gauge_id));
}

GaugeScanResult gauge_scan(const IsingProblem& problem, std::int32_t n_gauges,
                           const ScanSettings& settings, std::uint64_t seed) {
    if (n_gauges < 2) throw ValidationError("gauge_scan: need at least 2 gauges");
    return gauge_scan(problem, scan_gauges(n_gauges, problem.n, seed), settings,
                      seed);
}

GaugeScanResult gauge_scan(const IsingProblem& problem,
                           const std::vector<Gauge>& gauges,
                           const ScanSettings& settings,
                           std::uint64_t sample_seed) {
    if (gauges.empty()) throw ValidationError("gauge_scan: no gauges");
    const std::int32_t n_gauges = static_cast<std::int32_t>(gauges.size());
    GaugeScanResult result;
    result.reads_per_gauge = settings.reads_per_spec;
    result.epsilon_percent = settings.epsilon_percent;
    for (std::int32_t id = 0; id < n_gauges; ++id) {
        SamplerConfig cfg = settings.sampler;
        cfg.n_reads = settings.reads_per_spec;
        cfg.seed = seed_mix(sample_seed, "sample", id);
        const IsingProblem gauged = apply_gauge(problem, gauges[id]);
        const ReadoutSet reads = sample(gauged, cfg, settings.noise);
        const std::vector<EnergyBatch> batches =
            resolve_energies(reads, problem, gauges[id]);
        GaugeScanEntry entry;
        entry.gauge_id = id;
        entry.gauge = gauges[id];
        entry.score = elite_score_batched(batches, settings.epsilon_percent);
        entry.summary = summarize(gauge_spec_id(id), batches);
        entry.counts = count_positive(gauged);
        result.n_reps = reads.n_reps;
        result.sampler_calls += 1;
        result.batches_run += reads.n_reps;
        result.entries.push_back(std::move(entry));
    }
    return result;
}

GaugeScanResult gauge_scan(const EmbeddedProblem& problem, std::int32_t n_gauges,
                           const ScanSettings& settings, std::uint64_t seed) {
    if (n_gauges < 2) throw ValidationError("gauge_scan: need at least 2 gauges");
    return gauge_scan(problem, scan_gauges(n_gauges, problem.hardware.n, seed),
                      settings, seed);
}

GaugeScanResult gauge_scan(const EmbeddedProblem& problem,
                           const std::vector<Gauge>& gauges,
                           const ScanSettings& settings,
                           std::uint64_t sample_seed) {
    if (gauges.empty()) throw ValidationError("gauge_scan: no gauges");
    const std::int32_t n_gauges = static_cast<std::int32_t>(gauges.size());
    const bool partitioned =
        problem.logical_qubo && problem.logical_qubo->has_partition();
    GaugeScanResult result;
    result.reads_per_gauge = settings.reads_per_spec;
    result.epsilon_percent = settings.epsilon_percent;
    std::vector<std::pair<std::int32_t, std::int32_t>> chain_edges =
        problem.chain_edges;
    for (std::int32_t id = 0; id < n_gauges; ++id) {
        SamplerConfig cfg = settings.sampler;
        cfg.n_reads = settings.reads_per_spec;
        cfg.seed = seed_mix(sample_seed, "sample", id);
        const IsingProblem gauged = apply_gauge(problem.hardware, gauges[id]);
        const ReadoutSet reads = sample(gauged, cfg, settings.noise);
        const DecodeOutcome decoded =
            decode_reads(reads, problem, gauges[id], cfg.seed);
        GaugeScanEntry entry;
        entry.gauge_id = id;
        entry.gauge = gauges[id];
        entry.score =
            elite_score_batched(decoded.logical_batches, settings.epsilon_percent);
        entry.summary = summarize(gauge_spec_id(id), decoded.logical_batches);
        entry.counts = count_positive(gauged, chain_edges);
        entry.f_se = decoded.se.f_se;
        if (partitioned) {
            entry.problem_score = elite_score_batched(decoded.problem_batches,
                                                      settings.epsilon_percent);
            entry.problem_summary =
                summarize(gauge_spec_id(id), decoded.problem_batches);
        }
        result.n_reps = reads.n_reps;
        result.sampler_calls += 1;
        result.batches_run += reads.n_reps;
        result.entries.push_back(std::move(entry));
    }
    return result;
}

std::vector<JePoint> JeScanResult::fse_curve() const {
    std::vector<JePoint> c;
    c.reserve(points.size());
    for (const JeScanPoint& p : points) c.push_back({p.je, p.f_se});
    return c;
}

double JeScanResult::best_je() const {
    if (points.empty()) throw ValidationError("je scan: empty result");
    const JeScanPoint* best = &points.front();
    for (const JeScanPoint& p : points)
        if (p.score.value > best->score.value) best = &p;
    return best->je;
}

namespace {

JeScanResult je_scan_impl(
    const std::function<EmbeddedProblem(double)>& embedder,
    std::vector<double> candidates, const Gauge& gauge,
    const ScanSettings& settings, std::uint64_t seed) {
    if (candidates.size() < 2)
        throw ValidationError("je_scan: need at least 2 candidates");
    for (double je : candidates)
        if (!(je > 0.0))
            throw ValidationError("je_scan: candidates must be positive");
    std::sort(candidates.begin(), candidates.end());
    JeScanResult result;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const EmbeddedProblem ep = embedder(candidates[k]);
        SamplerConfig cfg = settings.sampler;
        cfg.n_reads = settings.reads_per_spec;
        cfg.seed = seed_mix(seed, "je", k);
        const IsingProblem gauged = apply_gauge(ep.hardware, gauge);
        const ReadoutSet reads = sample(gauged, cfg, settings.noise);
        const DecodeOutcome decoded = decode_reads(reads, ep, gauge, cfg.seed);
        JeScanPoint point;
        point.je = candidates[k];
        point.score =
            elite_score_batched(decoded.logical_batches, settings.epsilon_percent);
        point.f_se = decoded.se.f_se;
        point.scale = ep.scale;
        result.points.push_back(point);
    }
    return result;
}

}  // namespace

JeScanResult je_scan(const IsingProblem& logical, const Embedding& emb,
                     const HardwareGraph& graph,
                     const std::vector<double>& je_candidates, const Gauge& gauge,
                     const ScanSettings& settings, std::uint64_t seed) {
    return je_scan_impl(
        [&](double je) { return embed(logical, emb, graph, je); }, je_candidates,
        gauge, settings, seed);
}

JeScanResult je_scan(const Qubo& logical, const Embedding& emb,
                     const HardwareGraph& graph,
                     const std::vector<double>& je_candidates, const Gauge& gauge,
                     const ScanSettings& settings, std::uint64_t seed) {
    return je_scan_impl(
        [&](double je) { return embed(logical, emb, graph, je); }, je_candidates,
        gauge, settings, seed);
}

std::vector<std::int32_t> select_top_k(const GaugeScanResult& result,
                                       std::int32_t k, RankMethod method) {
    if (k < 1 || k > static_cast<std::int32_t>(result.entries.size()))
        throw ValidationError("select_top_k: k out of range");
    const RankTable table =
        method == RankMethod::elite ? result.elite_ranks() : result.greedy_ranks();
    std::vector<std::int32_t> ids;
    for (const std::string& spec : table.top(static_cast<std::size_t>(k))) {
        for (const GaugeScanEntry& e : result.entries)
            if (e.summary.spec_id == spec) ids.push_back(e.gauge_id);
    }
    return ids;
}

std::vector<std::int32_t> union_top_selection(const GaugeScanResult& result,
                                              std::int32_t k) {
    const RankTable elite = result.problem_elite_ranks();
    const RankTable greedy = result.problem_greedy_ranks();
    std::vector<std::string> ids = elite.top(static_cast<std::size_t>(k));
    for (const std::string& spec : greedy.top(static_cast<std::size_t>(k)))
        if (std::find(ids.begin(), ids.end(), spec) == ids.end())
            ids.push_back(spec);
    std::vector<std::int32_t> out;
    for (const std::string& spec : ids)
        for (const GaugeScanEntry& e : result.entries)
            if (e.summary.spec_id == spec) out.push_back(e.gauge_id);
    return out;
}

std::vector<double> default_je_candidates() {
    std::vector<double> c;
    const double lo = 0.5, hi = 10.0;
    const int n = 12;
    for (int i = 0; i < n; ++i)
        c.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return c;
}

namespace {

struct ExtensiveOutcome {
    long long reads_used = 0;
    std::map<double, long long> histogram;  // rounded decoded energies
    double best = std::numeric_limits<double>::infinity();
};

ExtensiveOutcome run_extensive(const EmbeddedProblem& ep, const Gauge& gauge,
                               long long n_total, const ScanSettings& settings,
                               std::uint64_t seed,
                               std::optional<double> target_energy) {
    SamplerConfig full = settings.sampler;
    full.n_reads = n_total;
    const BatchPlan plan = batch_plan(full);
    const IsingProblem gauged = apply_gauge(ep.hardware, gauge);
    ExtensiveOutcome out;
    for (std::int32_t b = 0; b < plan.n_reps; ++b) {
        SamplerConfig cfg = settings.sampler;
        cfg.n_reads = plan.reads_per_batch;
        cfg.seed = seed_mix(seed, "ext", b);
        const ReadoutSet reads = sample(gauged, cfg, settings.noise);
        const DecodeOutcome decoded = decode_reads(reads, ep, gauge, cfg.seed);
        for (const EnergyBatch& eb : decoded.logical_batches) {
            for (double e : eb.energies) {
                const double r = round_energy(e);
                ++out.histogram[r];
                if (r < out.best) out.best = r;
            }
        }
        out.reads_used += reads.n_reads();
        if (target_energy && out.best <= round_energy(*target_energy)) break;
    }
    return out;
}

TuneReport tune_impl(const std::function<EmbeddedProblem(double)>& embedder,
                     const std::vector<double>& je_candidates,
                     std::int32_t n_gauges, const TuneBudgets& budgets,
                     const ScanSettings& settings, std::uint64_t seed,
                     bool second_je_scan, std::optional<double> target_energy) {
    if (je_candidates.size() < 2)
        throw ValidationError("iterative_tune: need at least 2 J_E candidates");
    ScanSettings scan_settings = settings;
    scan_settings.reads_per_spec = budgets.scan_reads;

    TuneReport report;

    // plateau level from a single run far above the logical coupling scale
    {
        const EmbeddedProblem probe = embedder(10.0);
        SamplerConfig cfg = settings.sampler;
        cfg.n_reads = budgets.scan_reads;
        cfg.seed = seed_mix(seed, "fmax");
        const Gauge id_gauge = Gauge::identity(
            static_cast<std::size_t>(probe.hardware.n));
        const ReadoutSet reads = sample(probe.hardware, cfg, settings.noise);
        const DecodeOutcome decoded = decode_reads(reads, probe, id_gauge, cfg.seed);
        report.f_max = decoded.se.f_se;
    }
    if (!(report.f_max > 0.0))
        throw RegionNotFoundError(
            "iterative_tune: chains never align even at J_E = 10", {});

    const Gauge no_gauge = Gauge::identity(
        static_cast<std::size_t>(embedder(je_candidates.front()).hardware.n));
    const JeScanResult je1 = je_scan_impl(embedder, je_candidates, no_gauge,
                                          scan_settings, seed_mix(seed, "je1"));
    report.je_curve = je1.points;
    report.region = je_region_bounds(je1.fse_curve(), report.f_max);

    // best-scoring candidate inside the [J*, J**] region
    {
        const JeScanPoint* best = nullptr;
        for (const JeScanPoint& p : je1.points) {
            if (p.je < report.region.lower || p.je > report.region.upper) continue;
            if (!best || p.score.value > best->score.value) best = &p;
        }
        if (!best)
            throw RegionNotFoundError("iterative_tune: no candidate inside region",
                                      je1.fse_curve());
        report.chosen_je = best->je;
    }

    const EmbeddedProblem chosen = embedder(report.chosen_je);
    const GaugeScanResult scan =
        gauge_scan(chosen, n_gauges, scan_settings, seed_mix(seed, "gauges"));

    double best_scan_energy = std::numeric_limits<double>::infinity();
    for (const GaugeScanEntry& e : scan.entries)
        best_scan_energy = std::min(best_scan_energy, e.summary.lowest_energy());
    for (const GaugeScanEntry& e : scan.entries)
        report.scan_scores.push_back(
            {e.gauge_id, e.score.value, count_at(e.summary, best_scan_energy)});

    const bool partitioned =
        chosen.logical_qubo && chosen.logical_qubo->has_partition();
    report.selected_gauges =
        partitioned ? union_top_selection(scan, budgets.top_k)
                    : select_top_k(scan, budgets.top_k, RankMethod::elite);

    double extensive_je = report.chosen_je;
    if (second_je_scan) {
        const Gauge& best_gauge = scan.by_id(report.selected_gauges.front()).gauge;
        const JeScanResult je2 = je_scan_impl(embedder, je_candidates, best_gauge,
                                              scan_settings, seed_mix(seed, "je2"));
        const JeScanPoint* best = nullptr;
        for (const JeScanPoint& p : je2.points) {
            if (p.je < report.region.lower || p.je > report.region.upper) continue;
            if (!best || p.score.value > best->score.value) best = &p;
        }
        if (best) {
            report.second_je = best->je;
            extensive_je = best->je;
        }
    }

    report.extensive = budgets.extensive_reads > budgets.scan_reads;
    if (!report.extensive) return report;

    const EmbeddedProblem ext_problem = embedder(extensive_je);
    std::vector<ExtensiveOutcome> outcomes;
    for (std::int32_t id : report.selected_gauges)
        outcomes.push_back(run_extensive(ext_problem, scan.by_id(id).gauge,
                                         budgets.extensive_reads, settings,
                                         seed_mix(seed, "extensive", id),
                                         target_energy));
    double reference = target_energy ? round_energy(*target_energy)
                                     : std::numeric_limits<double>::infinity();
    if (!target_energy)
        for (const ExtensiveOutcome& o : outcomes)
            reference = std::min(reference, o.best);
    report.reference_energy = reference;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const ExtensiveOutcome& o = outcomes[i];
        ExtensiveStat stat;
        stat.gauge_id = report.selected_gauges[i];
        stat.reads_used = o.reads_used;
        auto it = o.histogram.find(reference);
        stat.n_gs = it == o.histogram.end() ? 0 : it->second;
        stat.p_s = o.reads_used > 0
                       ? static_cast<double>(stat.n_gs) /
                             static_cast<double>(o.reads_used)
                       : 0.0;
        stat.r99_reps = r99(std::min(stat.p_s, 1.0));
        stat.best_energy = o.best;
        report.extensive_stats.push_back(stat);
    }
    return report;
}

}  // namespace

TuneReport iterative_tune(const IsingProblem& logical, const Embedding& emb,
                          const HardwareGraph& graph,
                          const std::vector<double>& je_candidates,
                          std::int32_t n_gauges, const TuneBudgets& budgets,
                          const ScanSettings& settings, std::uint64_t seed,
                          bool second_je_scan,
                          std::optional<double> target_energy) {
    return tune_impl([&](double je) { return embed(logical, emb, graph, je); },
                     je_candidates, n_gauges, budgets, settings, seed,
                     second_je_scan, target_energy);
}

TuneReport iterative_tune(const Qubo& logical, const Embedding& emb,
                          const HardwareGraph& graph,
                          const std::vector<double>& je_candidates,
                          std::int32_t n_gauges, const TuneBudgets& budgets,
                          const ScanSettings& settings, std::uint64_t seed,
                          bool second_je_scan,
                          std::optional<double> target_energy) {
    return tune_impl([&](double je) { return embed(logical, emb, graph, je); },
                     je_candidates, n_gauges, budgets, settings, seed,
                     second_je_scan, target_energy);
}

const ContainmentRow& ContainmentTable::row(const std::string& method,
                                            long long n_reads) const {
    for (const ContainmentRow& r : rows)
        if (r.method == method && r.n_reads == n_reads) return r;
    throw ValidationError("containment: no row for " + method + " at " +
                          std::to_string(n_reads) + " reads");
}

namespace {

std::string eps_label(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", eps);
    return std::string("eps") + buf;
}

}  // namespace

ContainmentTable containment_experiment(const IsingProblem& problem,
                                        std::int32_t n_gauges,
                                        const std::vector<long long>& reads_grid,
                                        const std::vector<double>& eps_grid,
                                        std::int32_t n_experiments,
                                        long long n_total,
                                        const ScanSettings& settings,
                                        std::uint64_t seed, std::int32_t top_k) {
    if (n_gauges < 2 || top_k < 1 || top_k > n_gauges)
        throw ValidationError("containment: bad gauge/top_k counts");
    if (reads_grid.empty() || eps_grid.empty() || n_experiments < 1)
        throw ValidationError("containment: empty grid");
    for (long long r : reads_grid)
        if (r < 1 || r >= n_total)
            throw ValidationError(
                "containment: N_total must exceed every scan N_reads");

    const std::vector<Gauge> gauges = scan_gauges(n_gauges, problem.n, seed);

    // ground truth: greedy performance rank from the long runs
    std::vector<SpecSummary> truth_summaries;
    for (std::int32_t id = 0; id < n_gauges; ++id) {
        SamplerConfig cfg = settings.sampler;
        cfg.n_reads = n_total;
        cfg.seed = seed_mix(seed, "truth", id);
        const IsingProblem gauged = apply_gauge(problem, gauges[id]);
        const ReadoutSet reads = sample(gauged, cfg, settings.noise);
        truth_summaries.push_back(
            summarize(gauge_spec_id(id), resolve_energies(reads, problem, gauges[id])));
    }
    const RankTable truth = greedy_rank(truth_summaries);
    truth_summaries.clear();

    // hits[grid][method][m]: any of the true top-(m+1) inside the predicted top-k
    const std::size_t n_methods = 1 + eps_grid.size();
    std::vector<std::vector<std::vector<long long>>> hits(
        reads_grid.size(),
        std::vector<std::vector<long long>>(
            n_methods, std::vector<long long>(static_cast<std::size_t>(top_k), 0)));

    for (std::size_t gi = 0; gi < reads_grid.size(); ++gi) {
        const std::uint64_t grid_seed = seed_mix(seed, "exp", gi);
        for (std::int32_t e = 0; e < n_experiments; ++e) {
            const std::uint64_t exp_seed =
                seed_mix(grid_seed, static_cast<std::uint64_t>(e));
            std::vector<SpecSummary> summaries;
            std::vector<std::vector<std::pair<std::string, EliteScore>>> scores(
                eps_grid.size());
            for (std::int32_t id = 0; id < n_gauges; ++id) {
                SamplerConfig cfg = settings.sampler;
                cfg.n_reads = reads_grid[gi];
                cfg.seed = seed_mix(exp_seed, static_cast<std::uint64_t>(id));
                const IsingProblem gauged = apply_gauge(problem, gauges[id]);
                const ReadoutSet reads = sample(gauged, cfg, settings.noise);
                const std::vector<EnergyBatch> batches =
                    resolve_energies(reads, problem, gauges[id]);
                summaries.push_back(summarize(gauge_spec_id(id), batches));
                for (std::size_t k = 0; k < eps_grid.size(); ++k)
                    scores[k].emplace_back(gauge_spec_id(id),
                                           elite_score_batched(batches, eps_grid[k]));
            }
            std::vector<std::vector<std::string>> predictions;
            predictions.push_back(
                greedy_estimator_rank(summaries).top(static_cast<std::size_t>(top_k)));
            for (std::size_t k = 0; k < eps_grid.size(); ++k)
                predictions.push_back(
                    estimator_rank(scores[k]).top(static_cast<std::size_t>(top_k)));
            for (std::size_t m = 0; m < predictions.size(); ++m) {
                const std::set<std::string> predicted(predictions[m].begin(),
                                                      predictions[m].end());
                for (std::int32_t t = 0; t < top_k; ++t) {
                    // nested events: hit if any of the true top-(t+1) is predicted
                    bool hit = false;
                    for (std::int32_t j = 0; j <= t && !hit; ++j)
                        hit = predicted.count(truth.entries[j].spec_id) > 0;
                    if (hit) ++hits[gi][m][static_cast<std::size_t>(t)];
                }
            }
        }
    }

    ContainmentTable table;
    table.n_gauges = n_gauges;
    table.top_k = top_k;
    table.n_total = n_total;
    table.n_experiments = n_experiments;
    for (std::size_t gi = 0; gi < reads_grid.size(); ++gi) {
        for (std::size_t m = 0; m < n_methods; ++m) {
            ContainmentRow row;
            row.method = m == 0 ? "greedy" : eps_label(eps_grid[m - 1]);
            row.n_reads = reads_grid[gi];
            for (std::int32_t t = 0; t < top_k; ++t)
                row.fractions.push_back(
                    static_cast<double>(hits[gi][m][static_cast<std::size_t>(t)]) /
                    static_cast<double>(n_experiments));
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

std::vector<CouplerCorrelation> correlate_positive_couplers(
    const GaugeScanResult& scan, const RankTable& performance) {
    if (scan.entries.size() < 10)
        throw ValidationError("correlate: need at least 10 gauges");
    std::vector<double> ranks;
    ranks.reserve(scan.entries.size());
    for (const GaugeScanEntry& e : scan.entries)
        ranks.push_back(
            static_cast<double>(performance.rank_of(e.summary.spec_id)));
    const std::vector<std::pair<std::string, std::function<double(const PositiveCounts&)>>>
        kinds = {
            {"j_positive", [](const PositiveCounts& c) { return double(c.couplers); }},
            {"nonchain_j_positive",
             [](const PositiveCounts& c) { return double(c.nonchain_couplers); }},
            {"chain_j_positive",
             [](const PositiveCounts& c) { return double(c.chain_couplers); }},
            {"h_positive", [](const PositiveCounts& c) { return double(c.fields); }},
        };
    std::vector<CouplerCorrelation> out;
    for (const auto& [name, extract] : kinds) {
        std::vector<double> counts;
        counts.reserve(scan.entries.size());
        for (const GaugeScanEntry& e : scan.entries)
            counts.push_back(extract(e.counts));
        const SpearmanResult r = spearman(counts, ranks);
        out.push_back({name, r.rho, r.degenerate});
    }
    return out;
}

}  // namespace anneal
