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

#include "anneal/embedding.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "anneal/rng.hpp"

namespace anneal {

Embedding Embedding::identity(const HardwareGraph& graph) {
    Embedding e;
    e.chains.reserve(graph.node_count());
    for (std::int32_t id : graph.nodes()) {
        if (id != static_cast<std::int32_t>(e.chains.size()))
            throw ValidationError(
                "identity embedding requires contiguous usable ids");
        e.chains.push_back({id});
    }
    return e;
}

namespace {

// chain_of[q] = logical var owning hardware qubit q, or -1
std::vector<std::int32_t> owner_map(const Embedding& emb, std::int32_t hardware_n) {
    std::vector<std::int32_t> owner(static_cast<std::size_t>(hardware_n), -1);
    for (std::size_t v = 0; v < emb.chains.size(); ++v) {
        if (emb.chains[v].empty())
            throw ValidationError("embedding: empty chain for logical var " +
                                  std::to_string(v));
        for (std::int32_t q : emb.chains[v]) {
            if (q < 0 || q >= hardware_n)
                throw ValidationError("embedding: hardware id out of range");
            if (owner[static_cast<std::size_t>(q)] != -1)
                throw ValidationError("embedding: chains overlap at qubit " +
                                      std::to_string(q));
            owner[static_cast<std::size_t>(q)] = static_cast<std::int32_t>(v);
        }
    }
    return owner;
}

void check_chain_connected(const Embedding& emb, const HardwareGraph& graph,
                           std::size_t v) {
    const auto& chain = emb.chains[v];
    for (std::int32_t q : chain)
        if (!graph.has_node(q))
            throw ValidationError("embedding: chain uses absent qubit " +
                                  std::to_string(q));
    if (chain.size() == 1) return;
    std::vector<std::int32_t> sorted = chain;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::int32_t> stack{chain[0]};
    std::vector<std::int32_t> seen{chain[0]};
    while (!stack.empty()) {
        std::int32_t q = stack.back();
        stack.pop_back();
        for (std::int32_t nb : graph.neighbors(q)) {
            if (!std::binary_search(sorted.begin(), sorted.end(), nb)) continue;
            if (std::find(seen.begin(), seen.end(), nb) != seen.end()) continue;
            seen.push_back(nb);
            stack.push_back(nb);
        }
    }
    if (seen.size() != chain.size())
        throw ValidationError("embedding: chain for logical var " +
                              std::to_string(v) + " is disconnected");
}

EmbeddedProblem embed_ising(const IsingProblem& logical, const Embedding& emb,
                            const HardwareGraph& graph, double chain_strength,
                            std::optional<Qubo> source_qubo) {
    logical.validate();
    if (!(chain_strength > 0.0))
        throw ValidationError("embed: chain strength must be positive");
    if (emb.logical_count() != logical.n)
        throw ValidationError("embed: embedding covers " +
                              std::to_string(emb.logical_count()) +
                              " vars, problem has " + std::to_string(logical.n));
    const std::int32_t hn = graph.id_bound();
    std::vector<std::int32_t> owner = owner_map(emb, hn);
    for (std::size_t v = 0; v < emb.chains.size(); ++v)
        check_chain_connected(emb, graph, v);

    IsingProblem hw;
    hw.n = hn;
    hw.h.assign(static_cast<std::size_t>(hn), 0.0);
    hw.offset = logical.offset;
    for (std::int32_t v = 0; v < logical.n; ++v) {
        const auto& chain = emb.chains[static_cast<std::size_t>(v)];
        const double share = logical.h[static_cast<std::size_t>(v)] /
                             static_cast<double>(chain.size());
        for (std::int32_t q : chain) hw.h[static_cast<std::size_t>(q)] = share;
    }

    // classify every hardware edge: intra-chain, inter-chain, or unused
    std::map<std::pair<std::int32_t, std::int32_t>,
             std::vector<std::pair<std::int32_t, std::int32_t>>>
        between;  // (logical u < v) -> hardware edges joining their chains
    std::vector<std::pair<std::int32_t, std::int32_t>> chain_edges;
    for (const auto& e : graph.edges()) {
        std::int32_t a = owner[static_cast<std::size_t>(e.first)];
        std::int32_t b = owner[static_cast<std::size_t>(e.second)];
        if (a == -1 || b == -1) continue;
        if (a == b)
            chain_edges.push_back(e);
        else
            between[{std::min(a, b), std::max(a, b)}].push_back(e);
    }

    std::vector<Coupler> couplers;
    for (const Coupler& c : logical.couplers) {
        if (c.value == 0.0) continue;
        auto it = between.find({c.i, c.j});
        if (it == between.end() || it->second.empty())
            throw ValidationError("embed: no hardware edge joins chains " +
                                  std::to_string(c.i) + " and " +
                                  std::to_string(c.j));
        const double share = c.value / static_cast<double>(it->second.size());
        for (const auto& e : it->second)
            couplers.push_back({e.first, e.second, share});
    }
    for (const auto& e : chain_edges)
        couplers.push_back({e.first, e.second, -chain_strength});
    std::sort(couplers.begin(), couplers.end(),
              [](const Coupler& a, const Coupler& b) {
                  return a.i < b.i || (a.i == b.i && a.j < b.j);
              });
    hw.couplers = std::move(couplers);

    NormalizedProblem norm = normalize_dynamic_range(hw);
    EmbeddedProblem ep;
    ep.hardware = std::move(norm.problem);
    ep.scale = norm.scale;
    ep.embedding = emb;
    ep.chain_strength = chain_strength;
    ep.chain_edges = std::move(chain_edges);
    ep.logical_ising = logical;
    ep.logical_qubo = std::move(source_qubo);
    return ep;
}

}  // namespace

EmbeddedProblem embed(const IsingProblem& logical, const Embedding& emb,
                      const HardwareGraph& graph, double chain_strength) {
    return embed_ising(logical, emb, graph, chain_strength, std::nullopt);
}

EmbeddedProblem embed(const Qubo& logical, const Embedding& emb,
                      const HardwareGraph& graph, double chain_strength) {
    return embed_ising(qubo_to_ising(logical), emb, graph, chain_strength,
                       logical);
}

SpinConfig majority_vote_decode(const SpinConfig& hardware_config,
                                const Embedding& emb, std::uint64_t tie_seed) {
    SpinConfig out;
    out.values.resize(emb.chains.size());
    for (std::size_t v = 0; v < emb.chains.size(); ++v) {
        int sum = 0;
        for (std::int32_t q : emb.chains[v]) {
            if (static_cast<std::size_t>(q) >= hardware_config.size())
                throw ValidationError("decode: config does not cover chain qubit");
            sum += hardware_config.values[static_cast<std::size_t>(q)];
        }
        if (sum == 0) {
            Rng coin(seed_mix(tie_seed, static_cast<std::uint64_t>(v)));
            out.values[v] = static_cast<std::int8_t>(coin.plus_minus_one());
        } else {
            out.values[v] = sum > 0 ? std::int8_t{+1} : std::int8_t{-1};
        }
    }
    return out;
}

SpinConfig lift_aligned(const Embedding& emb, const SpinConfig& logical,
                        std::int32_t hardware_n) {
    if (logical.size() != emb.chains.size())
        throw ValidationError("lift: logical config does not match embedding");
    SpinConfig hw;
    hw.values.assign(static_cast<std::size_t>(hardware_n), +1);
    for (std::size_t v = 0; v < emb.chains.size(); ++v)
        for (std::int32_t q : emb.chains[v])
            hw.values[static_cast<std::size_t>(q)] = logical.values[v];
    return hw;
}

bool chains_aligned(const SpinConfig& hardware_config, const Embedding& emb) {
    for (const auto& chain : emb.chains) {
        const std::int8_t first =
            hardware_config.values[static_cast<std::size_t>(chain.front())];
        for (std::int32_t q : chain)
            if (hardware_config.values[static_cast<std::size_t>(q)] != first)
                return false;
    }
    return true;
}

SEReport strict_embedding_fraction(const std::vector<SpinConfig>& hardware_reads,
                                   const Embedding& emb) {
    if (hardware_reads.empty())
        throw ValidationError("strict_embedding_fraction: no readouts");
    SEReport r;
    r.passed.reserve(hardware_reads.size());
    std::size_t passing = 0;
    for (const SpinConfig& s : hardware_reads) {
        bool ok = chains_aligned(s, emb);
        r.passed.push_back(ok);
        if (ok) ++passing;
    }
    r.f_se = static_cast<double>(passing) /
             static_cast<double>(hardware_reads.size());
    return r;
}

JeRegion je_region_bounds(const std::vector<JePoint>& curve, double f_max,
                          double onset_fraction) {
    if (curve.empty()) throw ValidationError("je_region_bounds: empty curve");
    if (!(f_max > 0.0) || f_max > 1.0)
        throw ValidationError("je_region_bounds: f_max must lie in (0, 1]");
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve[i].je <= curve[i - 1].je)
            throw ValidationError("je_region_bounds: curve not sorted by J_E");
    JeRegion region;
    bool lower_found = false;
    for (const JePoint& p : curve) {
        if (p.f_se >= 0.05) {
            region.lower = p.je;
            lower_found = true;
            break;
        }
    }
    if (!lower_found)
        throw RegionNotFoundError(
            "je_region_bounds: no candidate reaches f_SE = 0.05", curve);
    const double onset = onset_fraction * f_max;
    bool upper_found = false;
    for (const JePoint& p : curve) {
        if (p.f_se >= onset) {
            region.upper = p.je;
            upper_found = true;
            break;
        }
    }
    if (!upper_found)
        throw RegionNotFoundError(
            "je_region_bounds: no candidate reaches the f_SE plateau", curve);
    if (region.upper < region.lower) region.upper = region.lower;
    return region;
}

double logical_energy(const EmbeddedProblem& ep, const SpinConfig& logical) {
    if (ep.logical_qubo)
        return qubo_energy(*ep.logical_qubo, spins_to_binary(logical));
    return energy(ep.logical_ising, logical);
}

double logical_problem_energy(const EmbeddedProblem& ep,
                              const SpinConfig& logical) {
    if (!ep.logical_qubo || !ep.logical_qubo->has_partition())
        throw ValidationError(
            "logical_problem_energy: no partitioned QUBO attached");
    return qubo_problem_energy(*ep.logical_qubo, spins_to_binary(logical));
}

}  // namespace anneal
