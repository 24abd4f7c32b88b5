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

#include "anneal/ising.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "anneal/rng.hpp"

namespace anneal {

void IsingProblem::validate() const {
    if (n < 0) throw ValidationError("ising: negative variable count");
    if (static_cast<std::int32_t>(h.size()) != n)
        throw ValidationError("ising: h size does not match n");
    for (std::size_t k = 0; k < couplers.size(); ++k) {
        const Coupler& c = couplers[k];
        if (c.i < 0 || c.j >= n || c.i >= c.j)
            throw ValidationError("ising: coupler endpoints must satisfy 0 <= i < j < n");
        if (k > 0) {
            const Coupler& prev = couplers[k - 1];
            if (prev.i > c.i || (prev.i == c.i && prev.j >= c.j))
                throw ValidationError("ising: couplers must be sorted and unique");
        }
    }
    if (normalized && !within_dynamic_range())
        throw ValidationError("ising: normalized flag set but |h| <= 2, |J| <= 1 violated");
}

double IsingProblem::max_abs_h() const {
    double m = 0.0;
    for (double v : h) m = std::max(m, std::abs(v));
    return m;
}

double IsingProblem::max_abs_j() const {
    double m = 0.0;
    for (const Coupler& c : couplers) m = std::max(m, std::abs(c.value));
    return m;
}

bool IsingProblem::within_dynamic_range() const {
    return max_abs_h() <= 2.0 + 1e-15 && max_abs_j() <= 1.0 + 1e-15;
}

bool Gauge::is_identity() const {
    for (std::int8_t s : signs)
        if (s != 1) return false;
    return true;
}

void Qubo::validate() const {
    if (n < 0) throw ValidationError("qubo: negative variable count");
    if (static_cast<std::int32_t>(linear.size()) != n)
        throw ValidationError("qubo: linear size does not match n");
    for (const Coupler& c : quadratic)
        if (c.i < 0 || c.j >= n || c.i >= c.j)
            throw ValidationError("qubo: quadratic endpoints must satisfy 0 <= i < j < n");
    if (!ancilla.empty() && static_cast<std::int32_t>(ancilla.size()) != n)
        throw ValidationError("qubo: partition size does not match n");
}

double round_energy(double e) {
    return std::nearbyint(e * 1e12) / 1e12;
}

double energy(const IsingProblem& p, const SpinConfig& s) {
    if (static_cast<std::int32_t>(s.size()) != p.n)
        throw ValidationError("energy: config length does not match problem");
    double e = p.offset;
    for (std::int32_t i = 0; i < p.n; ++i) e += p.h[i] * s.values[i];
    for (const Coupler& c : p.couplers)
        e += c.value * s.values[c.i] * s.values[c.j];
    return e;
}

IsingProblem apply_gauge(const IsingProblem& p, const Gauge& a) {
    if (static_cast<std::int32_t>(a.size()) != p.n)
        throw ValidationError("apply_gauge: gauge length does not match problem");
    IsingProblem out = p;
    for (std::int32_t i = 0; i < p.n; ++i) out.h[i] = a.signs[i] * p.h[i];
    for (std::size_t k = 0; k < p.couplers.size(); ++k)
        out.couplers[k].value =
            a.signs[p.couplers[k].i] * a.signs[p.couplers[k].j] * p.couplers[k].value;
    return out;
}

SpinConfig ungauge(const SpinConfig& s, const Gauge& a) {
    if (s.size() != a.size())
        throw ValidationError("ungauge: config and gauge lengths differ");
    SpinConfig out = s;
    for (std::size_t i = 0; i < s.size(); ++i)
        out.values[i] = static_cast<std::int8_t>(a.signs[i] * s.values[i]);
    return out;
}

Gauge random_gauge(std::int32_t n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("random_gauge: n must be >= 1");
    Rng rng(seed);
    Gauge g;
    g.signs.resize(static_cast<std::size_t>(n));
    for (std::int32_t i = 0; i < n; ++i)
        g.signs[i] = static_cast<std::int8_t>(rng.plus_minus_one());
    return g;
}

IsingProblem qubo_to_ising(const Qubo& q) {
    q.validate();
    IsingProblem p;
    p.n = q.n;
    p.h.assign(static_cast<std::size_t>(q.n), 0.0);
    p.offset = q.offset;
    for (std::int32_t i = 0; i < q.n; ++i) {
        p.h[i] += q.linear[i] / 2.0;
        p.offset += q.linear[i] / 2.0;
    }
    for (const Coupler& c : q.quadratic) {
        p.h[c.i] += c.value / 4.0;
        p.h[c.j] += c.value / 4.0;
        p.offset += c.value / 4.0;
        if (c.value != 0.0) p.couplers.push_back({c.i, c.j, c.value / 4.0});
    }
    std::sort(p.couplers.begin(), p.couplers.end(),
              [](const Coupler& a, const Coupler& b) {
                  return a.i < b.i || (a.i == b.i && a.j < b.j);
              });
    return p;
}

NormalizedProblem normalize_dynamic_range(const IsingProblem& p) {
    if (p.n == 0) throw ValidationError("normalize: empty problem");
    double scale = std::max({p.max_abs_j(), p.max_abs_h() / 2.0, 1.0});
    NormalizedProblem out;
    out.scale = scale;
    out.problem = p;
    if (scale != 1.0) {
        for (double& v : out.problem.h) v /= scale;
        for (Coupler& c : out.problem.couplers) c.value /= scale;
        out.problem.offset /= scale;
    }
    out.problem.normalized = true;
    return out;
}

PositiveCounts count_positive(const IsingProblem& p) {
    PositiveCounts c;
    for (const Coupler& k : p.couplers) {
        if (k.value > 0.0) {
            ++c.couplers;
            ++c.nonchain_couplers;
        }
    }
    for (double v : p.h)
        if (v > 0.0) ++c.fields;
    return c;
}

PositiveCounts count_positive(
    const IsingProblem& p,
    const std::vector<std::pair<std::int32_t, std::int32_t>>& chain_edges) {
    PositiveCounts c = count_positive(p);
    c.nonchain_couplers = c.couplers;
    c.chain_couplers = 0;
    if (chain_edges.empty()) return c;
    std::vector<std::pair<std::int32_t, std::int32_t>> chains = chain_edges;
    std::sort(chains.begin(), chains.end());
    for (const Coupler& k : p.couplers) {
        if (k.value > 0.0 &&
            std::binary_search(chains.begin(), chains.end(),
                               std::make_pair(k.i, k.j))) {
            ++c.chain_couplers;
            --c.nonchain_couplers;
        }
    }
    return c;
}

double qubo_energy(const Qubo& q, const std::vector<std::uint8_t>& x) {
    if (static_cast<std::int32_t>(x.size()) != q.n)
        throw ValidationError("qubo_energy: assignment length does not match");
    double e = q.offset;
    for (std::int32_t i = 0; i < q.n; ++i)
        if (x[i]) e += q.linear[i];
    for (const Coupler& c : q.quadratic)
        if (x[c.i] && x[c.j]) e += c.value;
    return e;
}

double qubo_problem_energy(const Qubo& q, const std::vector<std::uint8_t>& x) {
    if (!q.has_partition())
        throw ValidationError("qubo_problem_energy: no variable partition present");
    if (static_cast<std::int32_t>(x.size()) != q.n)
        throw ValidationError("qubo_problem_energy: assignment length does not match");
    double e = q.offset;
    for (std::int32_t i = 0; i < q.n; ++i)
        if (x[i] && !q.ancilla[i]) e += q.linear[i];
    for (const Coupler& c : q.quadratic)
        if (x[c.i] && x[c.j] && !q.ancilla[c.i] && !q.ancilla[c.j]) e += c.value;
    return e;
}

std::vector<std::uint8_t> spins_to_binary(const SpinConfig& s) {
    std::vector<std::uint8_t> x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        x[i] = s.values[i] > 0 ? 1 : 0;
    return x;
}

SpinConfig binary_to_spins(const std::vector<std::uint8_t>& x) {
    SpinConfig s;
    s.values.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        s.values[i] = x[i] ? std::int8_t{+1} : std::int8_t{-1};
    return s;
}

namespace {
inline std::uint64_t hash_u64(std::uint64_t h, std::uint64_t v) {
    char buf[8];
    std::memcpy(buf, &v, 8);
    return fnv1a64(std::string_view(buf, 8), h);
}
inline std::uint64_t hash_double(std::uint64_t h, double d) {
    if (d == 0.0) d = 0.0;  // collapse -0.0
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    return hash_u64(h, bits);
}
}  // namespace

std::uint64_t content_hash(const IsingProblem& p) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    h = hash_u64(h, static_cast<std::uint64_t>(p.n));
    for (double v : p.h) h = hash_double(h, v);
    for (const Coupler& c : p.couplers) {
        h = hash_u64(h, static_cast<std::uint64_t>(c.i));
        h = hash_u64(h, static_cast<std::uint64_t>(c.j));
        h = hash_double(h, c.value);
    }
    h = hash_double(h, p.offset);
    return h;
}

}  // namespace anneal
