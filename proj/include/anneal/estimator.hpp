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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anneal/ising.hpp"

namespace anneal {

/// Energies of one repetition's readouts, in any order.
struct EnergyBatch {
    std::vector<double> energies;
    std::int32_t batch_index = 0;
};

/// Elite-mean score: the negated mean of the lowest epsilon percent of the
/// readout energies. Higher value = better expected performance.
struct EliteScore {
    double value = 0.0;
    double epsilon_percent = 0.0;
    long long n_reads = 0;  // reads per repetition
    std::int32_t n_reps = 1;
};

/// n_elite = ceil(epsilon * n_reads / 100), computed on the exact rational
/// (products within 1e-9 of an integer are treated as that integer so the
/// ceiling never jumps on floating-point dust).
long long elite_count(double epsilon_percent, long long n_reads);

EliteScore elite_mean(const EnergyBatch& batch, double epsilon_percent);

/// Mean of the per-repetition elite means. All batches must be the same
/// size (the repetition split is assumed equal). With a single batch this
/// is bit-identical to elite_mean.
EliteScore elite_score_batched(const std::vector<EnergyBatch>& batches,
                               double epsilon_percent);

/// Energy histogram of one Hamiltonian specification's readouts. Keys are
/// rounded with round_energy so equal-in-exact-arithmetic states coincide.
struct SpecSummary {
    std::string spec_id;
    std::map<double, long long> histogram;
    long long total_reads = 0;

    void add(double raw_energy);
    double lowest_energy() const;  // +inf when empty
};

SpecSummary summarize(std::string spec_id, const std::vector<double>& energies);
SpecSummary summarize(std::string spec_id, const std::vector<EnergyBatch>& batches);

/// p_s = n_gs / N_total, with n_gs the histogram count at the (rounded)
/// ground energy.
double success_probability(const SpecSummary& summary, double ground_energy);

/// Repetitions needed to observe the optimum at least once with 99%
/// probability: ceil(ln(0.01) / ln(1 - p_s)). p_s >= 0.99 gives 1; p_s = 0
/// is unbounded and reported as nullopt.
std::optional<long long> r99(double p_s);

struct RankedSpec {
    std::string spec_id;
    std::int32_t rank = 0;            // 1 = best
    double score = 0.0;               // NaN when the method has no score
};

struct RankTable {
    std::vector<RankedSpec> entries;  // ascending rank

    std::size_t size() const { return entries.size(); }
    /// Rank of a spec id; throws ValidationError when absent.
    std::int32_t rank_of(const std::string& spec_id) const;
    std::vector<std::string> top(std::size_t k) const;
};

/// Greedy performance comparator: walk both histograms from the lowest
/// energy up; at the first differing position the lower energy wins, and at
/// equal energy the higher count wins. Returns <0 when a ranks better than
/// b, >0 when worse, 0 on identical histograms.
int compare_summaries_greedy(const SpecSummary& a, const SpecSummary& b);

/// Rank specifications by the greedy comparator; residual ties break by
/// ascending spec id.
RankTable greedy_rank(const std::vector<SpecSummary>& summaries);

/// The same comparator applied to small-sample summaries, used as a
/// baseline performance estimator.
inline RankTable greedy_estimator_rank(const std::vector<SpecSummary>& summaries) {
    return greedy_rank(summaries);
}

/// Rank by descending elite score; ties break by ascending spec id. All
/// scores must share epsilon and read counts.
RankTable estimator_rank(
    const std::vector<std::pair<std::string, EliteScore>>& scores);

/// Average ranks (1-based, fractional on ties).
std::vector<double> fractional_ranks(const std::vector<double>& values);

struct SpearmanResult {
    double rho = 0.0;
    bool degenerate = false;  // a side had zero rank variance; rho forced to 0
};

/// Spearman rank correlation with average-rank tie handling (Pearson
/// correlation of the fractional ranks).
SpearmanResult spearman(const std::vector<double>& a,
                        const std::vector<double>& b);

/// Spearman over two rank tables covering the same spec ids.
double spearman(const RankTable& a, const RankTable& b);

}  // namespace anneal
