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

#include "anneal/chimera.hpp"

#include <algorithm>

#include "anneal/rng.hpp"

namespace anneal {

void ChimeraSpec::validate() const {
    if (rows < 1 || cols < 1 || shore < 1)
        throw ValidationError("chimera: rows, cols and shore must be >= 1");
    for (std::int32_t b : broken)
        if (b < 0 || b >= qubit_count())
            throw ValidationError("chimera: broken id " + std::to_string(b) +
                                  " out of range [0, " +
                                  std::to_string(qubit_count()) + ")");
}

HardwareGraph::HardwareGraph(
    std::int32_t id_bound,
    std::vector<std::pair<std::int32_t, std::int32_t>> edges,
    std::vector<std::int32_t> absent)
    : id_bound_(id_bound), edges_(std::move(edges)) {
    present_.assign(static_cast<std::size_t>(id_bound), true);
    for (std::int32_t a : absent) {
        if (a < 0 || a >= id_bound)
            throw ValidationError("graph: absent id out of range");
        present_[static_cast<std::size_t>(a)] = false;
    }
    for (auto& e : edges_) {
        if (e.first > e.second) std::swap(e.first, e.second);
        if (e.first < 0 || e.second >= id_bound || e.first == e.second)
            throw ValidationError("graph: bad edge");
        if (!present_[e.first] || !present_[e.second])
            throw ValidationError("graph: edge touches an absent node");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    adj_.resize(static_cast<std::size_t>(id_bound));
    for (const auto& e : edges_) {
        adj_[e.first].push_back(e.second);
        adj_[e.second].push_back(e.first);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    for (std::int32_t id = 0; id < id_bound; ++id)
        if (present_[id]) nodes_.push_back(id);
}

bool HardwareGraph::has_node(std::int32_t id) const {
    return id >= 0 && id < id_bound_ && present_[static_cast<std::size_t>(id)];
}

bool HardwareGraph::has_edge(std::int32_t u, std::int32_t v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(u, v));
}

const std::vector<std::int32_t>& HardwareGraph::neighbors(std::int32_t id) const {
    return adj_.at(static_cast<std::size_t>(id));
}

std::int32_t HardwareGraph::degree(std::int32_t id) const {
    return static_cast<std::int32_t>(neighbors(id).size());
}

std::int32_t chimera_id(const ChimeraSpec& spec, std::int32_t row,
                        std::int32_t col, std::int32_t partition,
                        std::int32_t index) {
    return ((row * spec.cols) + col) * 2 * spec.shore + partition * spec.shore +
           index;
}

ChimeraCoord chimera_coord(const ChimeraSpec& spec, std::int32_t id) {
    const std::int32_t cell = id / (2 * spec.shore);
    const std::int32_t within = id % (2 * spec.shore);
    return ChimeraCoord{cell / spec.cols, cell % spec.cols, within / spec.shore,
                        within % spec.shore};
}

HardwareGraph build_chimera(const ChimeraSpec& spec) {
    spec.validate();
    std::vector<bool> ok(static_cast<std::size_t>(spec.qubit_count()), true);
    for (std::int32_t b : spec.broken) ok[static_cast<std::size_t>(b)] = false;

    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    auto add = [&](std::int32_t u, std::int32_t v) {
        if (ok[u] && ok[v]) edges.emplace_back(u, v);
    };
    for (std::int32_t r = 0; r < spec.rows; ++r) {
        for (std::int32_t c = 0; c < spec.cols; ++c) {
            for (std::int32_t a = 0; a < spec.shore; ++a) {
                // complete bipartite couplers within the cell
                for (std::int32_t b = 0; b < spec.shore; ++b)
                    add(chimera_id(spec, r, c, 0, a), chimera_id(spec, r, c, 1, b));
                // left partition couples to the cell below
                if (r + 1 < spec.rows)
                    add(chimera_id(spec, r, c, 0, a),
                        chimera_id(spec, r + 1, c, 0, a));
                // right partition couples to the cell to the right
                if (c + 1 < spec.cols)
                    add(chimera_id(spec, r, c, 1, a),
                        chimera_id(spec, r, c + 1, 1, a));
            }
        }
    }
    HardwareGraph g(spec.qubit_count(), std::move(edges), spec.broken);
    g.chimera = spec;
    return g;
}

IsingProblem random_spin_glass(const HardwareGraph& graph,
                               const std::vector<double>& coupling_domain,
                               const std::vector<double>& field_domain,
                               std::uint64_t seed) {
    if (coupling_domain.empty() || field_domain.empty())
        throw ValidationError("random_spin_glass: empty coefficient domain");
    if (graph.node_count() == 0)
        throw ValidationError("random_spin_glass: empty graph");
    Rng rng(seed);
    IsingProblem p;
    p.n = graph.id_bound();
    p.h.assign(static_cast<std::size_t>(p.n), 0.0);
    p.couplers.reserve(graph.edge_count());
    for (const auto& e : graph.edges())
        p.couplers.push_back(
            {e.first, e.second, coupling_domain[rng.below(coupling_domain.size())]});
    for (std::int32_t id : graph.nodes())
        p.h[static_cast<std::size_t>(id)] = field_domain[rng.below(field_domain.size())];
    p.normalized = p.within_dynamic_range();
    return p;
}

}  // namespace anneal
