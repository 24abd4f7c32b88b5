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
#include <optional>
#include <utility>
#include <vector>

#include "anneal/ising.hpp"

namespace anneal {

/// An M x N grid of K_{L,L} unit cells with an explicit list of broken
/// (unusable) qubit ids. Qubit id layout:
///   id = ((row * N) + col) * 2L + partition * L + index
/// with partition 0 = left (couples vertically between cells) and
/// partition 1 = right (couples horizontally).
struct ChimeraSpec {
    std::int32_t rows = 1;
    std::int32_t cols = 1;
    std::int32_t shore = 4;  // qubits per half-cell
    std::vector<std::int32_t> broken;

    std::int32_t qubit_count() const { return rows * cols * 2 * shore; }
    void validate() const;
};

struct ChimeraCoord {
    std::int32_t row = 0;
    std::int32_t col = 0;
    std::int32_t partition = 0;  // 0 = left, 1 = right
    std::int32_t index = 0;      // 0..shore-1
};

/// Undirected hardware connectivity. Ids live in [0, id_bound); broken ids
/// are simply absent, together with all their incident edges. Immutable
/// after construction; the sorted edge list is the canonical iteration
/// order for deterministic instance generation.
class HardwareGraph {
  public:
    HardwareGraph() = default;
    HardwareGraph(std::int32_t id_bound,
                  std::vector<std::pair<std::int32_t, std::int32_t>> edges,
                  std::vector<std::int32_t> absent = {});

    std::int32_t id_bound() const { return id_bound_; }
    const std::vector<std::int32_t>& nodes() const { return nodes_; }
    const std::vector<std::pair<std::int32_t, std::int32_t>>& edges() const {
        return edges_;
    }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_node(std::int32_t id) const;
    bool has_edge(std::int32_t u, std::int32_t v) const;
    const std::vector<std::int32_t>& neighbors(std::int32_t id) const;
    std::int32_t degree(std::int32_t id) const;

    std::optional<ChimeraSpec> chimera;  // set when built by build_chimera

  private:
    std::int32_t id_bound_ = 0;
    std::vector<std::int32_t> nodes_;
    std::vector<std::pair<std::int32_t, std::int32_t>> edges_;
    std::vector<bool> present_;
    std::vector<std::vector<std::int32_t>> adj_;
};

std::int32_t chimera_id(const ChimeraSpec& spec, std::int32_t row,
                        std::int32_t col, std::int32_t partition,
                        std::int32_t index);
ChimeraCoord chimera_coord(const ChimeraSpec& spec, std::int32_t id);

/// Intra-cell edges connect left to right within each cell; inter-cell
/// edges connect same-index left qubits of vertically adjacent cells and
/// same-index right qubits of horizontally adjacent cells. Broken qubits
/// and their incident edges are removed.
HardwareGraph build_chimera(const ChimeraSpec& spec);

/// Draw J uniformly from `coupling_domain` for every edge (in edge-list
/// order) and h uniformly from `field_domain` for every usable node (in
/// node order), from a single stream seeded by `seed`. Use {0} as the
/// field domain for field-free spin-glass families.
IsingProblem random_spin_glass(const HardwareGraph& graph,
                               const std::vector<double>& coupling_domain,
                               const std::vector<double>& field_domain,
                               std::uint64_t seed);

}  // namespace anneal
