// Shared test fixtures: small embeddings and problems used across the unit
// and acceptance suites.
#pragma once

#include <cstdint>
#include <vector>

#include "anneal/chimera.hpp"
#include "anneal/embedding.hpp"
#include "anneal/ising.hpp"
#include "anneal/rng.hpp"

namespace fixtures {

// Three logical spins on a triangle, embedded into one Chimera cell. Chains:
// {0}, {4}, {1,5} -- the third chain spans an in-cell coupler so chain
// breaking and majority voting are exercised with an 8-qubit hardware space.
struct Triangle {
    anneal::IsingProblem logical;
    anneal::Embedding embedding;
    anneal::HardwareGraph graph;

    Triangle() {
        graph = anneal::build_chimera({1, 1, 4, {}});
        logical.n = 3;
        logical.h = {0.25, -0.5, 0.0};
        logical.couplers = {{0, 1, 1.0}, {0, 2, -1.0}, {1, 2, 1.0}};
        embedding.chains = {{0}, {4}, {1, 5}};
    }
};

// Every logical variable is a vertical or horizontal 2-qubit chain in
// C(2,2,4): left-shore qubits pair with the cell below, right-shore qubits
// with the cell to the right. 16 logical variables, all 32 hardware qubits
// used, and each logical coupling is carried by exactly one in-cell edge.
struct PairChains {
    anneal::Embedding embedding;
    anneal::HardwareGraph graph;

    PairChains() {
        anneal::ChimeraSpec spec{2, 2, 4, {}};
        graph = anneal::build_chimera(spec);
        // logical var (0..7): left qubit k of cell column c -> chain
        // {(0,c,L,k), (1,c,L,k)}; (8..15): right qubit k of row r.
        for (std::int32_t c = 0; c < 2; ++c)
            for (std::int32_t k = 0; k < 4; ++k)
                embedding.chains.push_back(
                    {anneal::chimera_id(spec, 0, c, 0, k),
                     anneal::chimera_id(spec, 1, c, 0, k)});
        for (std::int32_t r = 0; r < 2; ++r)
            for (std::int32_t k = 0; k < 4; ++k)
                embedding.chains.push_back(
                    {anneal::chimera_id(spec, r, 0, 1, k),
                     anneal::chimera_id(spec, r, 1, 1, k)});
    }

    // dense couplings over every available logical pair (left var, right
    // var), continuous values so the spectrum has no accidental ties, plus
    // weak fields so the global spin flip is not a symmetry
    anneal::IsingProblem random_logical(std::uint64_t seed) const {
        anneal::IsingProblem p;
        p.n = 16;
        p.h.resize(16);
        anneal::Rng rng(seed);
        for (double& h : p.h) h = 0.3 * (2.0 * rng.uniform() - 1.0);
        for (std::int32_t a = 0; a < 8; ++a)
            for (std::int32_t b = 8; b < 16; ++b) {
                const double magnitude = 0.25 + 0.75 * rng.uniform();
                p.couplers.push_back(
                    {a, b, rng.plus_minus_one() > 0 ? magnitude : -magnitude});
            }
        p.normalized = true;
        return p;
    }
};

// QUBO with two problem variables and one ancilla. The penalty
// 3z(2 - x - y) lives entirely on ancilla-touching terms and is >= 0 for
// every assignment (zero only when z = 0 or x = y = 1), so the problem-frame
// energy never exceeds E_QUBO.
inline anneal::Qubo ancilla_qubo() {
    anneal::Qubo q;
    q.n = 3;
    q.offset = 0.5;
    q.linear = {-1.0, -1.0, 6.0};
    q.quadratic = {{0, 1, 2.0}, {0, 2, -3.0}, {1, 2, -3.0}};
    q.ancilla = {0, 0, 1};
    return q;
}

inline anneal::IsingProblem random_glass(const anneal::HardwareGraph& g,
                                         std::uint64_t seed) {
    return anneal::random_spin_glass(g, {+1.0, -1.0}, {0.0}, seed);
}

}  // namespace fixtures
