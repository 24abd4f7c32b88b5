#include "anneal/ising.hpp"

#include <cmath>

#include "anneal/chimera.hpp"
#include "anneal/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace anneal;

namespace {

IsingProblem random_problem(std::int32_t n, std::uint64_t seed,
                            bool with_fields = true) {
    Rng rng(seed);
    IsingProblem p;
    p.n = n;
    p.h.resize(static_cast<std::size_t>(n), 0.0);
    if (with_fields)
        for (double& h : p.h) h = rng.uniform() * 2.0 - 1.0;
    for (std::int32_t i = 0; i < n; ++i)
        for (std::int32_t j = i + 1; j < n; ++j)
            if (rng.uniform() < 0.5)
                p.couplers.push_back({i, j, rng.uniform() * 2.0 - 1.0});
    return p;
}

}  // namespace

TEST_CASE("energy of the empty problem is the offset") {
    IsingProblem p;
    p.n = 4;
    p.h.assign(4, 0.0);
    p.offset = 0.0;
    SpinConfig s{{+1, -1, +1, -1}};
    CHECK(energy(p, s) == 0.0);
}

TEST_CASE("single-coupler energies") {
    IsingProblem p;
    p.n = 2;
    p.h.assign(2, 0.0);
    p.couplers = {{0, 1, 1.0}};
    CHECK(energy(p, SpinConfig{{+1, +1}}) == 1.0);
    CHECK(energy(p, SpinConfig{{+1, -1}}) == -1.0);
    CHECK_THROWS_AS(energy(p, SpinConfig{{+1}}), ValidationError);
}

TEST_CASE("8-qubit ground energy matches exhaustive enumeration") {
    HardwareGraph cell = build_chimera({1, 1, 4, {}});
    IsingProblem p = random_spin_glass(cell, {+1.0, -1.0}, {0.0}, 5);
    oracle::GroundTruth truth = oracle::exhaustive_ground(p);
    double best = 1e300;
    for (std::uint64_t mask = 0; mask < 256; ++mask)
        best = std::min(best, energy(p, oracle::config_from_mask(mask, 8)));
    CHECK(best == doctest::Approx(truth.energy).epsilon(1e-15));
}

TEST_CASE("identity and all-minus gauges") {
    IsingProblem p = random_problem(6, 42);
    Gauge id = Gauge::identity(6);
    IsingProblem same = apply_gauge(p, id);
    for (std::int32_t i = 0; i < 6; ++i) CHECK(same.h[i] == p.h[i]);

    Gauge flip{std::vector<std::int8_t>(6, -1)};
    IsingProblem neg = apply_gauge(p, flip);
    for (std::int32_t i = 0; i < 6; ++i) CHECK(neg.h[i] == -p.h[i]);
    for (std::size_t k = 0; k < p.couplers.size(); ++k)
        CHECK(neg.couplers[k].value == p.couplers[k].value);
}

TEST_CASE("gauge invariance over every config of small problems") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        IsingProblem p = random_problem(10, 100 + seed);
        Gauge g = random_gauge(10, 200 + seed);
        IsingProblem pg = apply_gauge(p, g);
        for (std::uint64_t mask = 0; mask < 1024; ++mask) {
            SpinConfig s = oracle::config_from_mask(mask, 10);
            CHECK(energy(p, s) ==
                  doctest::Approx(energy(pg, ungauge(s, g))).epsilon(1e-13));
        }
    }
}

TEST_CASE("apply_gauge and ungauge are involutions") {
    IsingProblem p = random_problem(12, 7);
    Gauge g = random_gauge(12, 8);
    IsingProblem twice = apply_gauge(apply_gauge(p, g), g);
    for (std::int32_t i = 0; i < p.n; ++i) CHECK(twice.h[i] == p.h[i]);
    for (std::size_t k = 0; k < p.couplers.size(); ++k)
        CHECK(twice.couplers[k].value == p.couplers[k].value);

    SpinConfig s = oracle::config_from_mask(0b101101011011, 12);
    SpinConfig back = ungauge(ungauge(s, g), g);
    CHECK(back.values == s.values);
}

TEST_CASE("gauged ground state maps to the original ground state") {
    IsingProblem p = random_problem(10, 77);
    Gauge g = random_gauge(10, 78);
    IsingProblem pg = apply_gauge(p, g);
    oracle::GroundTruth t0 = oracle::exhaustive_ground(p);
    oracle::GroundTruth t1 = oracle::exhaustive_ground(pg);
    CHECK(t0.energy == doctest::Approx(t1.energy).epsilon(1e-13));
    SpinConfig gauged_ground = oracle::config_from_mask(t1.argmin_masks[0], 10);
    CHECK(energy(p, ungauge(gauged_ground, g)) ==
          doctest::Approx(t0.energy).epsilon(1e-13));
}

TEST_CASE("random gauges are seeded and balanced") {
    Gauge a = random_gauge(10000, 3);
    Gauge b = random_gauge(10000, 3);
    CHECK(a.signs == b.signs);
    long long plus = 0;
    for (std::int8_t s : a.signs) plus += s > 0;
    CHECK(plus > 4500);
    CHECK(plus < 5500);
    CHECK(random_gauge(16, 1).signs != random_gauge(16, 2).signs);
    CHECK_THROWS_AS(random_gauge(0, 1), ValidationError);
}

TEST_CASE("qubo_to_ising preserves energies over all assignments") {
    Rng rng(99);
    Qubo q;
    q.n = 10;
    q.offset = 0.75;
    q.linear.resize(10);
    for (double& v : q.linear) v = rng.uniform() * 4.0 - 2.0;
    for (std::int32_t i = 0; i < 10; ++i)
        for (std::int32_t j = i + 1; j < 10; ++j)
            if (rng.uniform() < 0.4)
                q.quadratic.push_back({i, j, rng.uniform() * 2.0 - 1.0});
    IsingProblem p = qubo_to_ising(q);
    for (std::uint64_t mask = 0; mask < 1024; ++mask) {
        CHECK(oracle::qubo_direct(q, mask) ==
              doctest::Approx(energy(p, oracle::config_from_mask(mask, 10)))
                  .epsilon(1e-12));
    }
}

TEST_CASE("qubo_to_ising trivial cases") {
    Qubo zero;
    zero.n = 3;
    zero.linear.assign(3, 0.0);
    IsingProblem p = qubo_to_ising(zero);
    CHECK(p.offset == 0.0);
    CHECK(p.couplers.empty());

    Qubo lin;
    lin.n = 1;
    lin.linear = {3.0};
    IsingProblem q = qubo_to_ising(lin);
    CHECK(q.h[0] == 1.5);
    CHECK(q.offset == 1.5);
}

TEST_CASE("normalize_dynamic_range scales into |h|<=2, |J|<=1") {
    IsingProblem p;
    p.n = 2;
    p.h = {1.0, -0.5};
    p.couplers = {{0, 1, 3.0}};  // a J_E=3 chain coupler dominates
    NormalizedProblem norm = normalize_dynamic_range(p);
    CHECK(norm.scale == 3.0);
    CHECK(norm.problem.couplers[0].value == 1.0);
    CHECK(norm.problem.h[0] == doctest::Approx(1.0 / 3.0));
    CHECK(norm.problem.normalized);

    // already inside the range: untouched
    IsingProblem ok = random_problem(5, 4);
    NormalizedProblem same = normalize_dynamic_range(ok);
    CHECK(same.scale == 1.0);
    for (std::size_t k = 0; k < ok.couplers.size(); ++k)
        CHECK(same.problem.couplers[k].value == ok.couplers[k].value);
}

TEST_CASE("normalization preserves the argmin set and scales gaps") {
    IsingProblem p = random_problem(10, 31);
    for (Coupler& c : p.couplers) c.value *= 4.0;  // force scale > 1
    NormalizedProblem norm = normalize_dynamic_range(p);
    REQUIRE(norm.scale > 1.0);
    oracle::GroundTruth before = oracle::exhaustive_ground(p);
    oracle::GroundTruth after = oracle::exhaustive_ground(norm.problem);
    CHECK(before.argmin_masks == after.argmin_masks);
    for (std::uint64_t mask = 0; mask < 1024; ++mask) {
        SpinConfig s = oracle::config_from_mask(mask, 10);
        CHECK(energy(norm.problem, s) ==
              doctest::Approx(energy(p, s) / norm.scale).epsilon(1e-12));
    }
}

TEST_CASE("positive-coefficient counts") {
    IsingProblem p;
    p.n = 3;
    p.h = {0.5, -0.5, 0.0};
    p.couplers = {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, -1.0}};
    PositiveCounts c = count_positive(p);
    CHECK(c.couplers == 2);
    CHECK(c.fields == 1);

    // the all-minus gauge leaves every J untouched
    PositiveCounts flipped =
        count_positive(apply_gauge(p, Gauge{{-1, -1, -1}}));
    CHECK(flipped.couplers == c.couplers);

    PositiveCounts split = count_positive(p, {{0, 2}});
    CHECK(split.chain_couplers == 1);
    CHECK(split.nonchain_couplers == 1);
}

TEST_CASE("uniform gauges flip about half the couplers positive") {
    HardwareGraph g = build_chimera({2, 2, 4, {}});
    IsingProblem p = random_spin_glass(g, {+1.0, -1.0}, {0.0}, 17);
    const long long m = static_cast<long long>(p.couplers.size());
    double mean = 0.0;
    const int n_gauges = 1000;
    for (int k = 0; k < n_gauges; ++k)
        mean += static_cast<double>(
            count_positive(apply_gauge(p, random_gauge(p.n, 1000 + k))).couplers);
    mean /= n_gauges;
    CHECK(mean > 0.45 * m);
    CHECK(mean < 0.55 * m);
}

TEST_CASE("qubo problem-frame energy needs a partition") {
    Qubo q;
    q.n = 2;
    q.linear = {1.0, 1.0};
    CHECK(qubo_energy(q, {1, 0}) == 1.0);
    CHECK_THROWS_AS(qubo_problem_energy(q, {1, 0}), ValidationError);
}

TEST_CASE("round_energy collapses accumulation noise") {
    CHECK(round_energy(3.0000000000000995e0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(round_energy(-2.9999999999999005) == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(round_energy(1.23456789) == 1.23456789);
}

TEST_CASE("coupler validation") {
    IsingProblem p;
    p.n = 3;
    p.h.assign(3, 0.0);
    p.couplers = {{1, 1, 0.5}};
    CHECK_THROWS_AS(p.validate(), ValidationError);  // self coupling
    p.couplers = {{0, 2, 0.5}, {0, 1, 0.5}};
    CHECK_THROWS_AS(p.validate(), ValidationError);  // unsorted
}
