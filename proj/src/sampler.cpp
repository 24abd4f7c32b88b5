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

#include "anneal/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anneal/parallel.hpp"
#include "anneal/rng.hpp"

namespace anneal {

void SamplerConfig::validate() const {
    if (n_reads < 1) throw ValidationError("sampler: n_reads must be >= 1");
    if (!(anneal_time_us > 0.0))
        throw ValidationError("sampler: annealing time must be positive");
    if (!(max_duty_us >= anneal_time_us))
        throw ValidationError("sampler: duty limit below one annealing cycle");
    if (sweeps < 1) throw ValidationError("sampler: sweeps must be >= 1");
    if (!(beta_start > 0.0) || !(beta_end > beta_start))
        throw ValidationError("sampler: need beta_end > beta_start > 0");
}

void NoiseModel::validate() const {
    if (sigma_h < 0.0 || sigma_j < 0.0 || quant_step < 0.0)
        throw ValidationError("noise: parameters must be non-negative");
}

BatchPlan batch_plan(const SamplerConfig& config) {
    config.validate();
    const long long cap =
        static_cast<long long>(std::floor(config.max_duty_us / config.anneal_time_us));
    BatchPlan plan;
    if (config.n_reads <= cap) {
        plan.n_reps = 1;
        plan.reads_per_batch = config.n_reads;
        return plan;
    }
    const long long reps = (config.n_reads + cap - 1) / cap;
    if (config.n_reads % reps != 0) {
        const long long compatible = (config.n_reads / reps) * reps;
        throw ValidationError(
            "batch_plan: " + std::to_string(config.n_reads) + " reads cannot be "
            "split equally into " + std::to_string(reps) + " repetitions (cap " +
            std::to_string(cap) + " per submission); nearest compatible n_reads is " +
            std::to_string(compatible));
    }
    plan.n_reps = static_cast<std::int32_t>(reps);
    plan.reads_per_batch = config.n_reads / reps;
    return plan;
}

std::uint64_t programming_seed(const NoiseModel& noise,
                               const IsingProblem& device_problem,
                               std::int32_t batch_index) {
    std::uint64_t s = seed_mix(noise.device_seed, "program");
    s = seed_mix(s, content_hash(device_problem));
    return seed_mix(s, static_cast<std::uint64_t>(batch_index));
}

namespace {
inline double quantize(double v, double step) {
    return step > 0.0 ? std::nearbyint(v / step) * step : v;
}
}  // namespace

IsingProblem program(const IsingProblem& p, const NoiseModel& noise,
                     std::uint64_t prog_seed) {
    noise.validate();
    if (noise.is_zero()) return p;
    IsingProblem out = p;
    Rng rng(prog_seed);
    // only programmed qubits pick up field error: a qubit is active when it
    // carries a field or at least one coupler
    std::vector<bool> active(static_cast<std::size_t>(p.n), false);
    for (std::int32_t i = 0; i < p.n; ++i)
        if (p.h[static_cast<std::size_t>(i)] != 0.0) active[i] = true;
    for (const Coupler& c : p.couplers) {
        active[static_cast<std::size_t>(c.i)] = true;
        active[static_cast<std::size_t>(c.j)] = true;
    }
    for (std::int32_t i = 0; i < p.n; ++i) {
        if (!active[static_cast<std::size_t>(i)]) continue;
        double v = out.h[static_cast<std::size_t>(i)];
        if (noise.sigma_h > 0.0) v += noise.sigma_h * rng.gaussian();
        out.h[static_cast<std::size_t>(i)] = quantize(v, noise.quant_step);
    }
    for (Coupler& c : out.couplers) {
        double v = c.value;
        if (noise.sigma_j > 0.0) v += noise.sigma_j * rng.gaussian();
        c.value = quantize(v, noise.quant_step);
    }
    out.normalized = false;
    return out;
}

namespace {

// compressed adjacency for the Metropolis inner loop
struct Csr {
    std::vector<std::int32_t> offsets;
    std::vector<std::int32_t> nbr;
    std::vector<double> wt;
    std::vector<double> h;

    explicit Csr(const IsingProblem& p) {
        const std::size_t n = static_cast<std::size_t>(p.n);
        std::vector<std::int32_t> deg(n, 0);
        for (const Coupler& c : p.couplers) {
            ++deg[static_cast<std::size_t>(c.i)];
            ++deg[static_cast<std::size_t>(c.j)];
        }
        offsets.resize(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + deg[i];
        nbr.resize(static_cast<std::size_t>(offsets[n]));
        wt.resize(nbr.size());
        std::vector<std::int32_t> fill(offsets.begin(), offsets.end() - 1);
        for (const Coupler& c : p.couplers) {
            nbr[fill[c.i]] = c.j;
            wt[fill[c.i]++] = c.value;
            nbr[fill[c.j]] = c.i;
            wt[fill[c.j]++] = c.value;
        }
        h = p.h;
    }
};

std::vector<double> beta_ramp(const SamplerConfig& config) {
    std::vector<double> betas(static_cast<std::size_t>(config.sweeps));
    const std::int32_t steps = std::max(config.sweeps - 1, 1);
    const double ratio = config.beta_end / config.beta_start;
    const double delta = (config.beta_end - config.beta_start) / steps;
    for (std::int32_t k = 0; k < config.sweeps; ++k)
        betas[static_cast<std::size_t>(k)] =
            config.schedule == BetaSchedule::geometric
                ? config.beta_start * std::pow(ratio, static_cast<double>(k) / steps)
                : config.beta_start + delta * k;
    return betas;
}

// One Metropolis anneal. Local fields are kept incrementally: a proposal is
// O(1) and only accepted flips touch the neighbor fields. Uphill moves test
// u > exp(-6) >= exp(-x) first so the exp() is skipped for almost every
// rejection in the cold sweeps (identical accept decisions either way).
void anneal_once(const Csr& csr, const std::vector<double>& betas, Rng& rng,
                 std::int8_t* out_spins, double* spins, double* field) {
    constexpr double kExpSkip = 0.00247875218;  // just above exp(-6)
    const std::int32_t n = static_cast<std::int32_t>(csr.h.size());
    for (std::int32_t i = 0; i < n; ++i)
        spins[i] = static_cast<double>(rng.plus_minus_one());
    for (std::int32_t i = 0; i < n; ++i) {
        double f = csr.h[static_cast<std::size_t>(i)];
        for (std::int32_t k = csr.offsets[i]; k < csr.offsets[i + 1]; ++k)
            f += csr.wt[static_cast<std::size_t>(k)] *
                 spins[csr.nbr[static_cast<std::size_t>(k)]];
        field[i] = f;
    }
    for (double beta : betas) {
        for (std::int32_t i = 0; i < n; ++i) {
            // flipping spin i changes the energy by -2 s_i field_i
            const double d_e = -2.0 * spins[i] * field[i];
            bool flip;
            if (d_e <= 0.0) {
                flip = true;
            } else {
                const double x = beta * d_e;
                if (x >= 45.0) {
                    flip = false;
                } else {
                    const double u = rng.uniform();
                    flip = (x >= 6.0 && u > kExpSkip) ? false : u < std::exp(-x);
                }
            }
            if (flip) {
                const double s_new = -spins[i];
                spins[i] = s_new;
                const double step = 2.0 * s_new;
                for (std::int32_t k = csr.offsets[i]; k < csr.offsets[i + 1]; ++k)
                    field[csr.nbr[static_cast<std::size_t>(k)]] +=
                        step * csr.wt[static_cast<std::size_t>(k)];
            }
        }
    }
    for (std::int32_t i = 0; i < n; ++i)
        out_spins[i] = spins[i] > 0.0 ? std::int8_t{+1} : std::int8_t{-1};
}

}  // namespace

ReadoutSet sample(const IsingProblem& p, const SamplerConfig& config,
                  const NoiseModel& noise) {
    p.validate();
    if (!p.within_dynamic_range())
        throw ValidationError(
            "sample: problem exceeds the dynamic range (normalize first)");
    const BatchPlan plan = batch_plan(config);

    ReadoutSet out;
    out.reads_per_batch = plan.reads_per_batch;
    out.n_reps = plan.n_reps;
    out.master_seed = config.seed;
    out.configs.resize(static_cast<std::size_t>(config.n_reads));
    out.device_energies.resize(static_cast<std::size_t>(config.n_reads));

    for (std::int32_t b = 0; b < plan.n_reps; ++b) {
        const std::uint64_t batch_seed = seed_mix(config.seed, "batch", b);
        const std::uint64_t prog_seed = programming_seed(noise, p, b);
        out.batch_seeds.push_back(batch_seed);
        out.programming_seeds.push_back(prog_seed);
        const IsingProblem programmed = program(p, noise, prog_seed);
        const Csr csr(programmed);
        const std::vector<double> betas = beta_ramp(config);
        const long long base = static_cast<long long>(b) * plan.reads_per_batch;
        parallel_for(static_cast<std::size_t>(plan.reads_per_batch),
                     [&](std::size_t r) {
                         const long long read = base + static_cast<long long>(r);
                         Rng rng(seed_mix(batch_seed, static_cast<std::uint64_t>(r)));
                         SpinConfig& cfg = out.configs[static_cast<std::size_t>(read)];
                         cfg.values.resize(static_cast<std::size_t>(p.n));
                         thread_local std::vector<double> spins, field;
                         spins.resize(static_cast<std::size_t>(p.n));
                         field.resize(static_cast<std::size_t>(p.n));
                         anneal_once(csr, betas, rng, cfg.values.data(),
                                     spins.data(), field.data());
                         out.device_energies[static_cast<std::size_t>(read)] =
                             energy(programmed, cfg);
                     });
    }
    return out;
}

std::vector<EnergyBatch> resolve_energies(const ReadoutSet& reads,
                                          const IsingProblem& original,
                                          const Gauge& gauge) {
    if (static_cast<std::int32_t>(gauge.size()) != original.n)
        throw ValidationError("resolve_energies: gauge length mismatch");
    std::vector<EnergyBatch> batches(static_cast<std::size_t>(reads.n_reps));
    for (std::int32_t b = 0; b < reads.n_reps; ++b) {
        batches[static_cast<std::size_t>(b)].batch_index = b;
        batches[static_cast<std::size_t>(b)].energies.resize(
            static_cast<std::size_t>(reads.reads_per_batch));
    }
    parallel_for(static_cast<std::size_t>(reads.n_reads()), [&](std::size_t i) {
        const SpinConfig clean = ungauge(reads.configs[i], gauge);
        const std::int32_t b = reads.batch_of(static_cast<long long>(i));
        const long long within =
            static_cast<long long>(i) - static_cast<long long>(b) * reads.reads_per_batch;
        batches[static_cast<std::size_t>(b)]
            .energies[static_cast<std::size_t>(within)] = energy(original, clean);
    });
    return batches;
}

}  // namespace anneal
