#include "anneal/sampler.hpp"

#include <cmath>

#include "anneal/chimera.hpp"
#include "anneal/parallel.hpp"
#include "anneal/rng.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace anneal;

TEST_CASE("batch plans follow the duty-cycle cap") {
    SamplerConfig cfg;
    cfg.n_reads = 50000;
    cfg.max_duty_us = 1e6;

    cfg.anneal_time_us = 100.0;
    BatchPlan plan = batch_plan(cfg);
    CHECK(plan.n_reps == 5);
    CHECK(plan.reads_per_batch == 10000);

    cfg.anneal_time_us = 20.0;
    plan = batch_plan(cfg);
    CHECK(plan.n_reps == 1);
    CHECK(plan.reads_per_batch == 50000);

    cfg.n_reads = 300;
    plan = batch_plan(cfg);
    CHECK(plan.n_reps == 1);
    CHECK(plan.reads_per_batch == 300);

    cfg.n_reads = 50001;  // cannot split equally into 2 repetitions
    cfg.anneal_time_us = 100.0;
    CHECK_THROWS_AS(batch_plan(cfg), ValidationError);
}

TEST_CASE("programming with zero noise is the identity") {
    HardwareGraph g = build_chimera({1, 1, 4, {}});
    IsingProblem p = fixtures::random_glass(g, 2);
    IsingProblem out = program(p, NoiseModel{}, 123);
    for (std::size_t k = 0; k < p.couplers.size(); ++k)
        CHECK(out.couplers[k].value == p.couplers[k].value);
}

TEST_CASE("quantization snaps coefficients to the grid") {
    IsingProblem p;
    p.n = 2;
    p.h = {0.47, -0.13};
    p.couplers = {{0, 1, 0.26}};
    NoiseModel noise;
    noise.quant_step = 0.05;
    IsingProblem out = program(p, noise, 1);
    CHECK(out.h[0] == doctest::Approx(0.45));
    CHECK(out.h[1] == doctest::Approx(-0.15));
    CHECK(out.couplers[0].value == doctest::Approx(0.25));
}

TEST_CASE("programming error statistics match sigma") {
    IsingProblem p;
    p.n = 2;
    p.h = {0.0, 0.0};
    p.couplers = {{0, 1, 0.0}};
    NoiseModel noise;
    noise.sigma_j = 0.05;
    double sum = 0, sum2 = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        IsingProblem out = program(p, noise, seed_mix(1, i));
        sum += out.couplers[0].value;
        sum2 += out.couplers[0].value * out.couplers[0].value;
    }
    const double std_dev = std::sqrt(sum2 / n - (sum / n) * (sum / n));
    CHECK(std_dev == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("idle qubits never pick up field error") {
    IsingProblem p;
    p.n = 4;  // qubit 3 carries nothing
    p.h = {0.5, 0.0, 0.0, 0.0};
    p.couplers = {{0, 1, 1.0}, {1, 2, -1.0}};
    NoiseModel noise;
    noise.sigma_h = 0.1;
    IsingProblem out = program(p, noise, 77);
    CHECK(out.h[0] != 0.5);   // active: field moved
    CHECK(out.h[1] != 0.0);   // active through couplers
    CHECK(out.h[3] == 0.0);   // idle: untouched
}

TEST_CASE("the programming error is a device property, not a run property") {
    HardwareGraph g = build_chimera({1, 1, 4, {}});
    IsingProblem p = fixtures::random_glass(g, 6);
    NoiseModel noise;
    noise.sigma_j = 0.05;
    noise.device_seed = 99;
    const std::uint64_t s0 = programming_seed(noise, p, 0);
    CHECK(s0 == programming_seed(noise, p, 0));  // same content, same batch
    CHECK(s0 != programming_seed(noise, p, 1));  // fresh per batch
    NoiseModel other = noise;
    other.device_seed = 100;
    CHECK(s0 != programming_seed(other, p, 0));  // different device
    IsingProblem q = p;
    q.couplers[0].value = -q.couplers[0].value;
    CHECK(s0 != programming_seed(noise, q, 0));  // different specification
}

TEST_CASE("sampling is deterministic and batch-structured") {
    HardwareGraph g = build_chimera({1, 2, 4, {}});
    IsingProblem p = fixtures::random_glass(g, 4);
    SamplerConfig cfg;
    cfg.n_reads = 60;
    cfg.anneal_time_us = 50000;  // duty 1e6 -> 3 batches of 20
    cfg.sweeps = 15;
    cfg.seed = 5;
    NoiseModel noise;
    noise.sigma_j = 0.03;
    ReadoutSet a = sample(p, cfg, noise);
    ReadoutSet b = sample(p, cfg, noise);
    CHECK(a.n_reps == 3);
    CHECK(a.reads_per_batch == 20);
    CHECK(a.device_energies == b.device_energies);
    for (long long i = 0; i < a.n_reads(); ++i)
        CHECK(a.configs[static_cast<std::size_t>(i)].values ==
              b.configs[static_cast<std::size_t>(i)].values);
    CHECK(a.batch_of(0) == 0);
    CHECK(a.batch_of(59) == 2);
    CHECK(a.batch_seeds.size() == 3);
}

TEST_CASE("results do not depend on the thread count") {
    HardwareGraph g = build_chimera({1, 1, 4, {}});
    IsingProblem p = fixtures::random_glass(g, 9);
    SamplerConfig cfg;
    cfg.n_reads = 64;
    cfg.sweeps = 10;
    cfg.seed = 31;
    set_max_threads(1);
    ReadoutSet serial = sample(p, cfg, NoiseModel{});
    set_max_threads(0);
    ReadoutSet parallel = sample(p, cfg, NoiseModel{});
    CHECK(serial.device_energies == parallel.device_energies);
}

TEST_CASE("a cold two-spin ferromagnet aligns") {
    IsingProblem p;
    p.n = 2;
    p.h = {0.0, 0.0};
    p.couplers = {{0, 1, -1.0}};
    SamplerConfig cfg;
    cfg.n_reads = 500;
    cfg.sweeps = 100;
    cfg.beta_end = 6.0;
    cfg.seed = 8;
    ReadoutSet reads = sample(p, cfg, NoiseModel{});
    int aligned = 0;
    for (const SpinConfig& s : reads.configs)
        aligned += s.values[0] == s.values[1];
    CHECK(aligned >= 495);
}

TEST_CASE("a single biased spin follows its field") {
    IsingProblem p;
    p.n = 1;
    p.h = {-1.0};
    SamplerConfig cfg;
    cfg.n_reads = 500;
    cfg.sweeps = 50;
    cfg.beta_end = 6.0;
    cfg.seed = 2;
    ReadoutSet reads = sample(p, cfg, NoiseModel{});
    int plus = 0;
    for (const SpinConfig& s : reads.configs) plus += s.values[0] > 0;
    CHECK(plus >= 495);
}

TEST_CASE("sampling rejects problems outside the dynamic range") {
    IsingProblem p;
    p.n = 2;
    p.h = {0.0, 0.0};
    p.couplers = {{0, 1, 3.0}};
    SamplerConfig cfg;
    CHECK_THROWS_AS(sample(p, cfg, NoiseModel{}), ValidationError);
}

TEST_CASE("resolved energies are clean-frame and gauge-independent") {
    HardwareGraph g = build_chimera({1, 1, 4, {}});
    IsingProblem p = fixtures::random_glass(g, 13);
    SamplerConfig cfg;
    cfg.n_reads = 200;
    cfg.sweeps = 10;
    cfg.seed = 3;

    // identity gauge, zero noise: device frame equals resolved frame
    ReadoutSet plain = sample(p, cfg, NoiseModel{});
    std::vector<EnergyBatch> resolved =
        resolve_energies(plain, p, Gauge::identity(8));
    for (std::size_t i = 0; i < 200; ++i)
        CHECK(plain.device_energies[i] ==
              doctest::Approx(resolved[0].energies[i]).epsilon(1e-12));

    // gauged, zero noise: resolved equals device by gauge invariance
    Gauge gauge = random_gauge(8, 21);
    ReadoutSet gauged = sample(apply_gauge(p, gauge), cfg, NoiseModel{});
    std::vector<EnergyBatch> back = resolve_energies(gauged, p, gauge);
    for (std::size_t i = 0; i < 200; ++i)
        CHECK(gauged.device_energies[i] ==
              doctest::Approx(back[0].energies[i]).epsilon(1e-12));

    // with noise the device frame drifts but the resolved frame re-evaluates
    // the clean problem exactly
    NoiseModel noise;
    noise.sigma_j = 0.1;
    ReadoutSet noisy = sample(apply_gauge(p, gauge), cfg, noise);
    std::vector<EnergyBatch> clean = resolve_energies(noisy, p, gauge);
    bool device_differs = false;
    for (std::size_t i = 0; i < 200; ++i) {
        const SpinConfig s = ungauge(noisy.configs[i], gauge);
        CHECK(clean[0].energies[i] == doctest::Approx(energy(p, s)).epsilon(1e-12));
        device_differs =
            device_differs ||
            std::abs(noisy.device_energies[i] - clean[0].energies[i]) > 1e-9;
    }
    CHECK(device_differs);
}

TEST_CASE("zero noise keeps gauges statistically equivalent") {
    HardwareGraph g = build_chimera({2, 2, 4, {}});
    IsingProblem p = fixtures::random_glass(g, 15);
    SamplerConfig cfg;
    cfg.n_reads = 2000;
    cfg.sweeps = 10;
    std::vector<double> means;
    for (int gi = 0; gi < 6; ++gi) {
        Gauge gauge = gi == 0 ? Gauge::identity(32) : random_gauge(32, 40 + gi);
        cfg.seed = seed_mix(1000, gi);
        ReadoutSet reads = sample(apply_gauge(p, gauge), cfg, NoiseModel{});
        std::vector<EnergyBatch> resolved = resolve_energies(reads, p, gauge);
        double m = 0;
        for (double e : resolved[0].energies) m += e;
        means.push_back(m / 2000.0);
    }
    // pooled standard error of a mean at these settings is about 0.25
    for (double m : means) CHECK(std::abs(m - means[0]) < 3.0);
}

TEST_CASE("coupler noise spreads per-gauge ground-state counts") {
    HardwareGraph g = build_chimera({2, 2, 4, {}});
    IsingProblem p = fixtures::random_glass(g, 16);
    SamplerConfig cfg;
    cfg.n_reads = 2000;
    cfg.sweeps = 8;
    cfg.beta_start = 1.0;
    cfg.beta_end = 12.0;

    auto gauge_counts = [&](const NoiseModel& noise) {
        // count hits at the best energy seen across all gauges
        std::vector<std::map<double, long long>> hists;
        double best = 1e300;
        for (int gi = 0; gi < 20; ++gi) {
            Gauge gauge = gi == 0 ? Gauge::identity(32) : random_gauge(32, 60 + gi);
            cfg.seed = seed_mix(7000, gi);
            ReadoutSet reads = sample(apply_gauge(p, gauge), cfg, noise);
            std::vector<EnergyBatch> resolved = resolve_energies(reads, p, gauge);
            std::map<double, long long> h;
            for (double e : resolved[0].energies) ++h[round_energy(e)];
            best = std::min(best, h.begin()->first);
            hists.push_back(std::move(h));
        }
        std::vector<double> counts;
        for (const auto& h : hists) {
            auto it = h.find(best);
            counts.push_back(it == h.end() ? 0.0 : double(it->second));
        }
        return counts;
    };

    auto variance = [](const std::vector<double>& v) {
        double m = 0, m2 = 0;
        for (double x : v) m += x;
        m /= double(v.size());
        for (double x : v) m2 += (x - m) * (x - m);
        return m2 / double(v.size() - 1);
    };

    NoiseModel ace;
    ace.sigma_j = 0.05;
    ace.device_seed = 4;
    const double var_noise = variance(gauge_counts(ace));
    const double var_clean = variance(gauge_counts(NoiseModel{}));
    CHECK(var_noise > var_clean);
}

TEST_CASE("more sweeps never hurt the ground-state frequency much") {
    HardwareGraph g = build_chimera({1, 2, 4, {}});
    IsingProblem p = fixtures::random_glass(g, 19);
    SamplerConfig cfg;
    cfg.n_reads = 1500;
    cfg.seed = 12;
    std::vector<long long> hits;
    double best = 1e300;
    std::vector<std::map<double, long long>> hists;
    for (int sweeps : {4, 16, 64}) {
        cfg.sweeps = sweeps;
        ReadoutSet reads = sample(p, cfg, NoiseModel{});
        std::map<double, long long> h;
        for (double e : reads.device_energies) ++h[round_energy(e)];
        best = std::min(best, h.begin()->first);
        hists.push_back(std::move(h));
    }
    for (const auto& h : hists) {
        auto it = h.find(best);
        hits.push_back(it == h.end() ? 0 : it->second);
    }
    CHECK(hits[1] >= hits[0] - 75);  // 0.05 * n_reads tolerance
    CHECK(hits[2] >= hits[1] - 75);
}
