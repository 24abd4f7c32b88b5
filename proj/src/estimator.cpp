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

#include "anneal/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anneal {

long long elite_count(double epsilon_percent, long long n_reads) {
    if (!(epsilon_percent > 0.0) || epsilon_percent > 100.0)
        throw ValidationError("elite_count: epsilon must lie in (0, 100]");
    if (n_reads < 1) throw ValidationError("elite_count: n_reads must be >= 1");
    double t = epsilon_percent * static_cast<double>(n_reads) / 100.0;
    double nearest = std::nearbyint(t);
    double ceiled = (std::abs(t - nearest) <= 1e-9 * std::max(1.0, std::abs(t)))
                        ? nearest
                        : std::ceil(t);
    long long k = static_cast<long long>(ceiled);
    if (k < 1) k = 1;
    if (k > n_reads) k = n_reads;
    return k;
}

EliteScore elite_mean(const EnergyBatch& batch, double epsilon_percent) {
    if (batch.energies.empty())
        throw ValidationError("elite_mean: empty batch");
    const long long n = static_cast<long long>(batch.energies.size());
    const long long k = elite_count(epsilon_percent, n);
    std::vector<double> sorted = batch.energies;
    std::partial_sort(sorted.begin(), sorted.begin() + k, sorted.end());
    double sum = 0.0;
    for (long long i = 0; i < k; ++i) sum += sorted[static_cast<std::size_t>(i)];
    EliteScore s;
    s.value = -(sum / static_cast<double>(k));
    s.epsilon_percent = epsilon_percent;
    s.n_reads = n;
    s.n_reps = 1;
    return s;
}

EliteScore elite_score_batched(const std::vector<EnergyBatch>& batches,
                               double epsilon_percent) {
    if (batches.empty())
        throw ValidationError("elite_score_batched: no batches");
    const std::size_t per = batches.front().energies.size();
    for (const EnergyBatch& b : batches)
        if (b.energies.size() != per)
            throw ValidationError(
                "elite_score_batched: repetitions must be equal-sized splits");
    if (batches.size() == 1) return elite_mean(batches.front(), epsilon_percent);
    double sum = 0.0;
    for (const EnergyBatch& b : batches)
        sum += elite_mean(b, epsilon_percent).value;
    EliteScore s;
    s.value = sum / static_cast<double>(batches.size());
    s.epsilon_percent = epsilon_percent;
    s.n_reads = static_cast<long long>(per);
    s.n_reps = static_cast<std::int32_t>(batches.size());
    return s;
}

void SpecSummary::add(double raw_energy) {
    ++histogram[round_energy(raw_energy)];
    ++total_reads;
}

double SpecSummary::lowest_energy() const {
    if (histogram.empty()) return std::numeric_limits<double>::infinity();
    return histogram.begin()->first;
}

SpecSummary summarize(std::string spec_id, const std::vector<double>& energies) {
    SpecSummary s;
    s.spec_id = std::move(spec_id);
    for (double e : energies) s.add(e);
    return s;
}

SpecSummary summarize(std::string spec_id, const std::vector<EnergyBatch>& batches) {
    SpecSummary s;
    s.spec_id = std::move(spec_id);
    for (const EnergyBatch& b : batches)
        for (double e : b.energies) s.add(e);
    return s;
}

double success_probability(const SpecSummary& summary, double ground_energy) {
    if (summary.total_reads < 1)
        throw ValidationError("success_probability: summary has no reads");
    auto it = summary.histogram.find(round_energy(ground_energy));
    long long n_gs = (it == summary.histogram.end()) ? 0 : it->second;
    return static_cast<double>(n_gs) / static_cast<double>(summary.total_reads);
}

std::optional<long long> r99(double p_s) {
    if (p_s < 0.0 || p_s > 1.0)
        throw ValidationError("r99: p_s must lie in [0, 1]");
    if (p_s == 0.0) return std::nullopt;
    if (p_s >= 0.99) return 1;
    // ln(1 - p_s) via log1p so tiny success probabilities keep full precision
    const double reps = std::ceil(std::log(0.01) / std::log1p(-p_s));
    if (!(reps < 9.0e18)) return std::nullopt;  // beyond any integer budget
    return static_cast<long long>(reps);
}

std::int32_t RankTable::rank_of(const std::string& spec_id) const {
    for (const RankedSpec& e : entries)
        if (e.spec_id == spec_id) return e.rank;
    throw ValidationError("rank table: unknown spec id " + spec_id);
}

std::vector<std::string> RankTable::top(std::size_t k) const {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < k && i < entries.size(); ++i)
        ids.push_back(entries[i].spec_id);
    return ids;
}

int compare_summaries_greedy(const SpecSummary& a, const SpecSummary& b) {
    auto ia = a.histogram.begin();
    auto ib = b.histogram.begin();
    while (ia != a.histogram.end() || ib != b.histogram.end()) {
        // an exhausted histogram reads as "+inf energy" at this position
        if (ia == a.histogram.end()) return +1;
        if (ib == b.histogram.end()) return -1;
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : +1;
        if (ia->second != ib->second) return ia->second > ib->second ? -1 : +1;
        ++ia;
        ++ib;
    }
    return 0;
}

RankTable greedy_rank(const std::vector<SpecSummary>& summaries) {
    for (const SpecSummary& s : summaries)
        if (s.total_reads < 1)
            throw ValidationError("greedy_rank: summary '" + s.spec_id +
                                  "' is empty");
    std::vector<const SpecSummary*> order;
    order.reserve(summaries.size());
    for (const SpecSummary& s : summaries) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(),
                     [](const SpecSummary* x, const SpecSummary* y) {
                         int c = compare_summaries_greedy(*x, *y);
                         if (c != 0) return c < 0;
                         return x->spec_id < y->spec_id;
                     });
    RankTable t;
    t.entries.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        t.entries.push_back({order[i]->spec_id,
                             static_cast<std::int32_t>(i + 1),
                             order[i]->lowest_energy()});
    return t;
}

RankTable estimator_rank(
    const std::vector<std::pair<std::string, EliteScore>>& scores) {
    if (scores.empty()) throw ValidationError("estimator_rank: no scores");
    const EliteScore& ref = scores.front().second;
    for (const auto& [id, s] : scores) {
        if (s.epsilon_percent != ref.epsilon_percent)
            throw ValidationError("estimator_rank: mixed epsilon values");
        if (s.n_reads != ref.n_reads || s.n_reps != ref.n_reps)
            throw ValidationError("estimator_rank: mixed read counts");
    }
    std::vector<const std::pair<std::string, EliteScore>*> order;
    order.reserve(scores.size());
    for (const auto& s : scores) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(), [](const auto* x, const auto* y) {
        if (x->second.value != y->second.value)
            return x->second.value > y->second.value;
        return x->first < y->first;
    });
    RankTable t;
    t.entries.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        t.entries.push_back({order[i]->first, static_cast<std::int32_t>(i + 1),
                             order[i]->second.value});
    return t;
}

std::vector<double> fractional_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
        // positions i..j share the average of ranks i+1..j+1
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

SpearmanResult spearman(const std::vector<double>& a,
                        const std::vector<double>& b) {
    if (a.size() != b.size())
        throw ValidationError("spearman: length mismatch");
    if (a.size() < 2)
        throw ValidationError("spearman: need at least 2 observations");
    std::vector<double> ra = fractional_ranks(a);
    std::vector<double> rb = fractional_ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = ra[i] - ma;
        double db = rb[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return {0.0, true};
    double rho = sab / std::sqrt(saa * sbb);
    if (rho > 1.0) rho = 1.0;
    if (rho < -1.0) rho = -1.0;
    return {rho, false};
}

double spearman(const RankTable& a, const RankTable& b) {
    if (a.size() != b.size())
        throw ValidationError("spearman: rank tables cover different spec sets");
    std::vector<double> ra, rb;
    ra.reserve(a.size());
    rb.reserve(a.size());
    for (const RankedSpec& e : a.entries) {
        ra.push_back(static_cast<double>(e.rank));
        rb.push_back(static_cast<double>(b.rank_of(e.spec_id)));
    }
    return spearman(ra, rb).rho;
}

}  // namespace anneal
