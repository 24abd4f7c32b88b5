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
#include <utility>
#include <vector>

#include "anneal/chimera.hpp"
#include "anneal/ising.hpp"

namespace anneal {

/// Chain map: logical variable i (0..k-1) -> non-empty set of hardware
/// qubits. Chains must be pairwise disjoint and connected in the hardware
/// graph, and every logical coupling needs at least one hardware edge
/// between its two chains.
struct Embedding {
    std::vector<std::vector<std::int32_t>> chains;

    std::int32_t logical_count() const {
        return static_cast<std::int32_t>(chains.size());
    }
    /// var i -> [i] for every usable node; requires contiguous usable ids.
    static Embedding identity(const HardwareGraph& graph);
};

/// A logical problem mapped onto hardware: fields and couplings split
/// equally over chains / parallel inter-chain edges, intra-chain edges set
/// to -chain_strength, everything renormalized into the dynamic range.
struct EmbeddedProblem {
    IsingProblem hardware;   // normalized, over the graph id space
    Embedding embedding;
    double chain_strength = 0.0;  // J_E, pre-normalization magnitude
    double scale = 1.0;
    std::vector<std::pair<std::int32_t, std::int32_t>> chain_edges;
    IsingProblem logical_ising;      // logical objective in spin form
    std::optional<Qubo> logical_qubo;  // retained when the source was a QUBO
};

EmbeddedProblem embed(const IsingProblem& logical, const Embedding& emb,
                      const HardwareGraph& graph, double chain_strength);
EmbeddedProblem embed(const Qubo& logical, const Embedding& emb,
                      const HardwareGraph& graph, double chain_strength);

/// Decode hardware spins to logical spins: each logical spin is the sign of
/// its chain's spin sum. Exact ties (even chains) flip a fair coin seeded
/// from (tie_seed, logical var), so parallel and serial decoding agree.
SpinConfig majority_vote_decode(const SpinConfig& hardware_config,
                                const Embedding& emb, std::uint64_t tie_seed);

/// Lift a logical config to hardware with every chain aligned. Unused
/// hardware ids are set to +1 (they carry no coefficients).
SpinConfig lift_aligned(const Embedding& emb, const SpinConfig& logical,
                        std::int32_t hardware_n);

/// Strict-embedding report: a read passes iff every chain is internally
/// uniform.
struct SEReport {
    double f_se = 0.0;
    std::vector<bool> passed;  // one flag per read
};

SEReport strict_embedding_fraction(const std::vector<SpinConfig>& hardware_reads,
                                   const Embedding& emb);

bool chains_aligned(const SpinConfig& hardware_config, const Embedding& emb);

struct JePoint {
    double je = 0.0;
    double f_se = 0.0;
};

/// Region of candidate chain strengths worth scanning.
struct JeRegion {
    double lower = 0.0;  // smallest J_E with f_SE >= 0.05
    double upper = 0.0;  // smallest J_E at the plateau onset (f_SE >= onset_fraction * f_max)
};

class RegionNotFoundError : public ValidationError {
  public:
    RegionNotFoundError(const std::string& what, std::vector<JePoint> curve)
        : ValidationError(what), curve(std::move(curve)) {}
    std::vector<JePoint> curve;
};

/// Curve must be sorted by J_E. f_max is the plateau level measured
/// one-shot at J_E >> 1.
JeRegion je_region_bounds(const std::vector<JePoint>& curve, double f_max,
                          double onset_fraction = 0.95);

/// Logical-frame energy of a decoded config: E_QUBO when the source was a
/// QUBO, otherwise the logical Ising objective.
double logical_energy(const EmbeddedProblem& ep, const SpinConfig& logical);

/// Problem-frame energy (ancilla terms dropped); requires a partitioned
/// logical QUBO.
double logical_problem_energy(const EmbeddedProblem& ep,
                              const SpinConfig& logical);

}  // namespace anneal
