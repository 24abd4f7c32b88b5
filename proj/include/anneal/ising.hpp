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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace anneal {

/// Bad user input (malformed problems, out-of-range parameters, files that
/// do not parse). The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One quadratic coefficient J_ij (or QUBO q_ij), stored with i < j.
struct Coupler {
    std::int32_t i = 0;
    std::int32_t j = 0;
    double value = 0.0;
};

/// Ising problem: minimize sum_i h_i s_i + sum_{i<j} J_ij s_i s_j + offset
/// over s in {-1,+1}^n. Variable ids are 0..n-1; ids without fields or
/// couplers are free spins (hardware graphs keep broken qubits as holes in
/// the id space). Couplers are kept sorted by (i, j) -- that order is the
/// canonical iteration order everywhere (generation, noise, hashing, files).
struct IsingProblem {
    std::int32_t n = 0;
    std::vector<double> h;           // size n
    std::vector<Coupler> couplers;   // i < j, sorted, unique
    double offset = 0.0;
    bool normalized = false;         // if set: |h| <= 2 and |J| <= 1 hold

    void validate() const;
    double max_abs_h() const;
    double max_abs_j() const;
    bool within_dynamic_range() const;
};

/// Spin assignment, entries in {-1,+1}.
struct SpinConfig {
    std::vector<std::int8_t> values;

    std::size_t size() const { return values.size(); }
    std::int8_t operator[](std::size_t i) const { return values[i]; }
};

/// Spin-reversal transform a in {-1,+1}^n. The all-ones gauge is the
/// identity ("no-gauge").
struct Gauge {
    std::vector<std::int8_t> signs;

    static Gauge identity(std::size_t n) {
        return Gauge{std::vector<std::int8_t>(n, +1)};
    }
    std::size_t size() const { return signs.size(); }
    bool is_identity() const;
};

/// Quadratic binary problem over x in {0,1}^n. `ancilla`, when non-empty,
/// partitions the variables: ancilla[i] != 0 marks penalty bookkeeping
/// variables, the rest define the problem-frame objective.
struct Qubo {
    std::int32_t n = 0;
    std::vector<double> linear;      // size n
    std::vector<Coupler> quadratic;  // i < j, sorted, unique
    double offset = 0.0;
    std::vector<std::uint8_t> ancilla;

    bool has_partition() const { return !ancilla.empty(); }
    void validate() const;
};

/// Round an energy to the 1e-12 grid. Ranking and histogramming compare
/// rounded energies so that accumulation-order noise cannot split states
/// that are equal in exact arithmetic (spin-glass energies are integers,
/// embedded energies small-denominator rationals).
double round_energy(double e);

double energy(const IsingProblem& p, const SpinConfig& s);

/// h'_i = a_i h_i, J'_ij = a_i a_j J_ij. Involution; leaves the spectrum
/// intact with configs mapped by ungauge().
IsingProblem apply_gauge(const IsingProblem& p, const Gauge& a);

/// Map a config between the gauged and original frames: s'_i = a_i s_i.
SpinConfig ungauge(const SpinConfig& s, const Gauge& a);

Gauge random_gauge(std::int32_t n, std::uint64_t seed);

/// Substitute x_i = (1 + s_i) / 2. Variable i maps to spin i; energies are
/// preserved exactly via the offset.
IsingProblem qubo_to_ising(const Qubo& q);

struct NormalizedProblem {
    IsingProblem problem;
    double scale = 1.0;
};

/// Divide everything (h, J, offset) by scale = max(max|J|, max|h|/2, 1) so
/// that |h| <= 2 and |J| <= 1. Argmin set is preserved; gaps shrink by
/// exactly 1/scale. Never scales up.
NormalizedProblem normalize_dynamic_range(const IsingProblem& p);

/// Sign counts over the coefficient sets; `chain_couplers` / `nonchain_couplers`
/// are split out when the chain edge list is supplied (embedded problems).
struct PositiveCounts {
    long long couplers = 0;           // all J > 0
    long long fields = 0;             // h > 0
    long long chain_couplers = 0;     // J > 0 on chain edges
    long long nonchain_couplers = 0;  // J > 0 elsewhere
};

PositiveCounts count_positive(const IsingProblem& p);
PositiveCounts count_positive(
    const IsingProblem& p,
    const std::vector<std::pair<std::int32_t, std::int32_t>>& chain_edges);

double qubo_energy(const Qubo& q, const std::vector<std::uint8_t>& x);

/// Problem-frame objective: the terms of q touching only non-ancilla
/// variables (offset included). Requires a partition.
double qubo_problem_energy(const Qubo& q, const std::vector<std::uint8_t>& x);

std::vector<std::uint8_t> spins_to_binary(const SpinConfig& s);
SpinConfig binary_to_spins(const std::vector<std::uint8_t>& x);

/// Order-independent content hash of the coefficients (n, h, couplers,
/// offset). Identifies a Hamiltonian specification for the noise model:
/// programming the same content on the same device realizes the same
/// analog errors.
std::uint64_t content_hash(const IsingProblem& p);

}  // namespace anneal
