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

#include <cstdint>
#include <vector>

#include "anneal/estimator.hpp"
#include "anneal/ising.hpp"

namespace anneal {

enum class BetaSchedule { linear, geometric };

/// Sampling request. The annealing time only matters through the duty-cycle
/// batching limit; the classical backend's quality is set by sweeps and the
/// inverse-temperature ramp.
struct SamplerConfig {
    long long n_reads = 1000;
    double anneal_time_us = 20.0;
    double max_duty_us = 1e6;  // maximum duty time per submission
    std::int32_t sweeps = 1000;
    double beta_start = 0.1;
    double beta_end = 5.0;
    BetaSchedule schedule = BetaSchedule::geometric;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Analog control error: each programming realizes h'_i = h_i + N(0, sigma_h)
/// on active qubits and J'_ij = J_ij + N(0, sigma_j), then snaps every
/// coefficient to the quantization grid when quant_step > 0. The realization
/// is a deterministic function of (device_seed, programmed content, batch),
/// so reprogramming the same Hamiltonian specification on the same simulated
/// device reproduces the same error pattern -- this is what gives gauges a
/// persistent, measurable performance difference.
struct NoiseModel {
    double sigma_h = 0.0;
    double sigma_j = 0.0;
    double quant_step = 0.0;  // 0 = off
    std::uint64_t device_seed = 0;

    bool is_zero() const {
        return sigma_h == 0.0 && sigma_j == 0.0 && quant_step == 0.0;
    }
    void validate() const;
};

struct BatchPlan {
    std::int32_t n_reps = 1;
    long long reads_per_batch = 0;
};

/// Per-batch cap = floor(max_duty / t_a); n_reps = ceil(n_reads / cap).
/// n_reads must split equally over the repetitions.
BatchPlan batch_plan(const SamplerConfig& config);

/// Seed identifying one programming event (see NoiseModel).
std::uint64_t programming_seed(const NoiseModel& noise,
                               const IsingProblem& device_problem,
                               std::int32_t batch_index);

/// Apply one programming's analog error to a normalized problem.
IsingProblem program(const IsingProblem& p, const NoiseModel& noise,
                     std::uint64_t prog_seed);

/// Batched sampler output, reads ordered by (batch, read-within-batch).
struct ReadoutSet {
    std::vector<SpinConfig> configs;
    std::vector<double> device_energies;  // under the programmed problem
    long long reads_per_batch = 0;
    std::int32_t n_reps = 1;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> batch_seeds;
    std::vector<std::uint64_t> programming_seeds;

    long long n_reads() const { return static_cast<long long>(configs.size()); }
    std::int32_t batch_of(long long read) const {
        return static_cast<std::int32_t>(read / reads_per_batch);
    }
};

/// Run the full batch plan: per batch, program the problem once, then run
/// independent single-spin-flip Metropolis anneals (beta swept per schedule,
/// `sweeps` full passes each) and record the final config. Deterministic in
/// (problem, config, noise), regardless of thread count.
ReadoutSet sample(const IsingProblem& p, const SamplerConfig& config,
                  const NoiseModel& noise);

/// Map readouts back to the clean frame: ungauge each config and evaluate it
/// against the original (noise-free, pre-gauge) problem, grouped per batch.
/// Scores and ranks always consume these clean energies.
std::vector<EnergyBatch> resolve_energies(const ReadoutSet& reads,
                                          const IsingProblem& original,
                                          const Gauge& gauge);

}  // namespace anneal
