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

#include "anneal/io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "anneal/rng.hpp"

namespace anneal {

using nlohmann::json;

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- instance format -------------------------------------------------------

std::string write_instance(const IsingProblem& p,
                           const std::vector<std::string>& comments) {
    p.validate();
    std::ostringstream out;
    for (const std::string& c : comments) out << "# " << c << "\n";
    std::vector<std::pair<std::int32_t, double>> fields;
    for (std::int32_t i = 0; i < p.n; ++i)
        if (p.h[static_cast<std::size_t>(i)] != 0.0)
            fields.emplace_back(i, p.h[static_cast<std::size_t>(i)]);
    out << "p ising " << p.n << ' ' << fields.size() << ' ' << p.couplers.size()
        << ' ' << format_real(p.offset) << "\n";
    for (const auto& [i, v] : fields) out << i << ' ' << format_real(v) << "\n";
    for (const Coupler& c : p.couplers)
        out << c.i << ' ' << c.j << ' ' << format_real(c.value) << "\n";
    return out.str();
}

std::string write_instance_json(const IsingProblem& p) {
    p.validate();
    json j;
    j["format"] = "ising";
    j["n"] = p.n;
    j["offset"] = p.offset;
    json h = json::array();
    for (std::int32_t i = 0; i < p.n; ++i)
        if (p.h[static_cast<std::size_t>(i)] != 0.0)
            h.push_back({i, p.h[static_cast<std::size_t>(i)]});
    j["h"] = std::move(h);
    json couplers = json::array();
    for (const Coupler& c : p.couplers) couplers.push_back({c.i, c.j, c.value});
    j["J"] = std::move(couplers);
    return j.dump(2) + "\n";
}

namespace {

std::string strip_comments(std::istream& in) {
    std::string text, line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        text += line;
        text += '\n';
    }
    return text;
}

IsingProblem finish_instance(IsingProblem p) {
    std::sort(p.couplers.begin(), p.couplers.end(),
              [](const Coupler& a, const Coupler& b) {
                  return a.i < b.i || (a.i == b.i && a.j < b.j);
              });
    p.normalized = p.within_dynamic_range();
    p.validate();
    return p;
}

IsingProblem instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("instance: bad JSON: ") + e.what());
    }
    IsingProblem p;
    p.n = j.at("n").get<std::int32_t>();
    if (p.n < 0) throw ValidationError("instance: negative n");
    p.h.assign(static_cast<std::size_t>(p.n), 0.0);
    p.offset = j.value("offset", 0.0);
    if (j.contains("h"))
        for (const auto& item : j.at("h")) {
            const std::int32_t i = item.at(0).get<std::int32_t>();
            if (i < 0 || i >= p.n) throw ValidationError("instance: h index out of range");
            p.h[static_cast<std::size_t>(i)] = item.at(1).get<double>();
        }
    if (j.contains("J"))
        for (const auto& item : j.at("J"))
            p.couplers.push_back({item.at(0).get<std::int32_t>(),
                                  item.at(1).get<std::int32_t>(),
                                  item.at(2).get<double>()});
    return finish_instance(std::move(p));
}

}  // namespace

IsingProblem read_instance(std::istream& in) {
    std::string text = strip_comments(in);
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw ValidationError("instance: empty input");
    if (text[first] == '{') return instance_from_json(text);

    std::istringstream ts(text);
    std::string word;
    ts >> word;
    if (word != "p") throw ValidationError("instance: expected 'p ising' header");
    ts >> word;
    if (word != "ising") throw ValidationError("instance: expected 'p ising' header");
    std::int64_t n = 0, n_h = 0, n_j = 0;
    double offset = 0.0;
    if (!(ts >> n >> n_h >> n_j >> offset))
        throw ValidationError("instance: malformed header");
    IsingProblem p;
    p.n = static_cast<std::int32_t>(n);
    p.h.assign(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)), 0.0);
    p.offset = offset;
    for (std::int64_t k = 0; k < n_h; ++k) {
        std::int32_t i;
        double v;
        if (!(ts >> i >> v)) throw ValidationError("instance: truncated h section");
        if (i < 0 || i >= p.n) throw ValidationError("instance: h index out of range");
        p.h[static_cast<std::size_t>(i)] = v;
    }
    for (std::int64_t k = 0; k < n_j; ++k) {
        std::int32_t i, j;
        double v;
        if (!(ts >> i >> j >> v))
            throw ValidationError("instance: truncated J section");
        p.couplers.push_back({i, j, v});
    }
    return finish_instance(std::move(p));
}

IsingProblem read_instance_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open instance file: " + path.string());
    return read_instance(in);
}

// --- hardware graph --------------------------------------------------------

std::string write_graph(const HardwareGraph& g) {
    if (!g.chimera)
        throw ValidationError("graph export requires chimera metadata");
    const ChimeraSpec& spec = *g.chimera;
    std::ostringstream out;
    out << "chimera " << spec.rows << ' ' << spec.cols << ' ' << spec.shore << ' '
        << spec.broken.size() << "\n";
    for (const auto& e : g.edges()) out << e.first << ' ' << e.second << "\n";
    for (std::int32_t b : spec.broken) out << b << "\n";
    return out.str();
}

HardwareGraph read_graph(std::istream& in) {
    std::string text = strip_comments(in);
    std::istringstream ts(text);
    std::string word;
    ts >> word;
    if (word != "chimera")
        throw ValidationError("graph: expected 'chimera' header");
    ChimeraSpec spec;
    std::size_t n_broken = 0;
    if (!(ts >> spec.rows >> spec.cols >> spec.shore >> n_broken))
        throw ValidationError("graph: malformed header");
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    std::vector<std::int32_t> numbers;
    std::int32_t v;
    while (ts >> v) numbers.push_back(v);
    if (numbers.size() < n_broken || (numbers.size() - n_broken) % 2 != 0)
        throw ValidationError("graph: malformed body");
    const std::size_t n_edges = (numbers.size() - n_broken) / 2;
    for (std::size_t k = 0; k < n_edges; ++k)
        edges.emplace_back(numbers[2 * k], numbers[2 * k + 1]);
    for (std::size_t k = 0; k < n_broken; ++k)
        spec.broken.push_back(numbers[2 * n_edges + k]);
    spec.validate();
    HardwareGraph g(spec.qubit_count(), std::move(edges), spec.broken);
    g.chimera = spec;
    return g;
}

HardwareGraph read_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open graph file: " + path.string());
    return read_graph(in);
}

// --- embedding -------------------------------------------------------------

std::string write_embedding(const Embedding& emb) {
    json j = json::object();
    for (std::size_t v = 0; v < emb.chains.size(); ++v)
        j[std::to_string(v)] = emb.chains[v];
    return j.dump(2) + "\n";
}

Embedding read_embedding(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("embedding: bad JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("embedding: expected an object");
    Embedding emb;
    emb.chains.resize(j.size());
    for (const auto& [key, value] : j.items()) {
        std::size_t var = 0;
        try {
            var = static_cast<std::size_t>(std::stoll(key));
        } catch (...) {
            throw ValidationError("embedding: non-numeric logical var '" + key + "'");
        }
        if (var >= emb.chains.size())
            throw ValidationError("embedding: logical vars must be 0..k-1");
        emb.chains[var] = value.get<std::vector<std::int32_t>>();
    }
    for (std::size_t v = 0; v < emb.chains.size(); ++v)
        if (emb.chains[v].empty())
            throw ValidationError("embedding: missing or empty chain for var " +
                                  std::to_string(v));
    return emb;
}

Embedding read_embedding_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open embedding file: " + path.string());
    return read_embedding(in);
}

// --- readouts --------------------------------------------------------------

std::string write_readouts_csv(const ReadoutSet& reads) {
    std::ostringstream out;
    out << "batch,read,energy_device,spins\n";
    for (long long i = 0; i < reads.n_reads(); ++i) {
        out << reads.batch_of(i) << ',' << i << ','
            << format_real(reads.device_energies[static_cast<std::size_t>(i)])
            << ',';
        for (std::int8_t s : reads.configs[static_cast<std::size_t>(i)].values)
            out << (s > 0 ? '+' : '-');
        out << "\n";
    }
    return out.str();
}

std::string write_readouts_meta(const ReadoutSet& reads,
                                const SamplerConfig& config,
                                const NoiseModel& noise) {
    json j;
    j["n_reads"] = config.n_reads;
    j["anneal_time_us"] = config.anneal_time_us;
    j["max_duty_us"] = config.max_duty_us;
    j["sweeps"] = config.sweeps;
    j["beta_start"] = config.beta_start;
    j["beta_end"] = config.beta_end;
    j["schedule"] =
        config.schedule == BetaSchedule::geometric ? "geometric" : "linear";
    j["seed"] = config.seed;
    j["noise"] = {{"sigma_h", noise.sigma_h},
                  {"sigma_j", noise.sigma_j},
                  {"quant_step", noise.quant_step},
                  {"device_seed", noise.device_seed}};
    j["n_reps"] = reads.n_reps;
    j["reads_per_batch"] = reads.reads_per_batch;
    j["batch_seeds"] = reads.batch_seeds;
    j["programming_seeds"] = reads.programming_seeds;
    return j.dump(2) + "\n";
}

ReadoutsFile read_readouts_csv(std::istream& in) {
    ReadoutsFile f;
    std::string line;
    if (!std::getline(in, line) || line.rfind("batch,read,energy_device,spins", 0) != 0)
        throw ValidationError("readouts: missing CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::getline(ls, field, ',');
        f.batch.push_back(static_cast<std::int32_t>(std::stol(field)));
        std::getline(ls, field, ',');  // read index, implied by the row order
        std::getline(ls, field, ',');
        f.energies.push_back(std::stod(field));
        std::getline(ls, field);
        SpinConfig s;
        s.values.reserve(field.size());
        for (char c : field) {
            if (c == '+')
                s.values.push_back(+1);
            else if (c == '-')
                s.values.push_back(-1);
            else
                throw ValidationError("readouts: bad spin character");
        }
        f.spins.push_back(std::move(s));
    }
    if (f.energies.empty()) throw ValidationError("readouts: no rows");
    return f;
}

ReadoutsFile read_readouts_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open readouts file: " + path.string());
    return read_readouts_csv(in);
}

std::vector<EnergyBatch> ReadoutsFile::as_batches() const {
    std::vector<EnergyBatch> batches;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const std::size_t b = static_cast<std::size_t>(batch[i]);
        if (b >= batches.size()) {
            if (b != batches.size())
                throw ValidationError("readouts: batch indices must be contiguous");
            batches.push_back(EnergyBatch{{}, static_cast<std::int32_t>(b)});
        }
        batches[b].energies.push_back(energies[i]);
    }
    return batches;
}

// --- result CSV shapes -----------------------------------------------------

std::string write_scores_csv(const std::vector<ScoreRow>& rows) {
    std::ostringstream out;
    out << "spec_id,score,rank,n_reads,n_reps,epsilon\n";
    for (const ScoreRow& r : rows) {
        out << r.spec_id << ',';
        if (r.has_score) out << format_real(r.score);
        out << ',' << r.rank << ',' << r.n_reads << ',' << r.n_reps << ','
            << format_real(r.epsilon) << "\n";
    }
    return out.str();
}

std::string write_je_curve_csv(const std::vector<JeScanPoint>& points) {
    std::ostringstream out;
    out << "J_E,f_SE,elite_score\n";
    for (const JeScanPoint& p : points)
        out << format_real(p.je) << ',' << format_real(p.f_se) << ','
            << format_real(p.score.value) << "\n";
    return out.str();
}

std::string write_gauge_csv(const GaugeScanResult& scan) {
    double best = std::numeric_limits<double>::infinity();
    for (const GaugeScanEntry& e : scan.entries)
        best = std::min(best, e.summary.lowest_energy());
    const RankTable ranks = scan.elite_ranks();
    std::ostringstream out;
    out << "gauge,score,n_gs,rank\n";
    for (const GaugeScanEntry& e : scan.entries) {
        auto it = e.summary.histogram.find(best);
        const long long n_gs = it == e.summary.histogram.end() ? 0 : it->second;
        out << e.gauge_id << ',' << format_real(e.score.value) << ',' << n_gs
            << ',' << ranks.rank_of(e.summary.spec_id) << "\n";
    }
    return out.str();
}

std::string write_correlation_csv(const std::vector<CouplerCorrelation>& rows) {
    std::ostringstream out;
    out << "count_type,spearman_rho,degenerate\n";
    for (const CouplerCorrelation& r : rows)
        out << r.count_type << ',' << format_real(r.rho) << ','
            << (r.degenerate ? 1 : 0) << "\n";
    return out.str();
}

std::string write_containment_csv(const ContainmentTable& table) {
    std::ostringstream out;
    out << "method,n_reads";
    for (std::int32_t m = 1; m <= table.top_k; ++m) out << ",any_top_" << m;
    out << "\n";
    for (const ContainmentRow& r : table.rows) {
        out << r.method << ',' << r.n_reads;
        for (double f : r.fractions) out << ',' << format_real(f);
        out << "\n";
    }
    return out.str();
}

namespace {

json je_points_json(const std::vector<JeScanPoint>& points) {
    json arr = json::array();
    for (const JeScanPoint& p : points)
        arr.push_back({{"je", p.je},
                       {"f_se", p.f_se},
                       {"scale", p.scale},
                       {"elite_score", p.score.value},
                       {"epsilon", p.score.epsilon_percent},
                       {"n_reads", p.score.n_reads},
                       {"n_reps", p.score.n_reps}});
    return arr;
}

}  // namespace

std::string tune_report_json(const TuneReport& report) {
    json j;
    j["f_max"] = report.f_max;
    j["region"] = {{"je_lower", report.region.lower},
                   {"je_upper", report.region.upper}};
    j["chosen_je"] = report.chosen_je;
    j["je_curve"] = je_points_json(report.je_curve);
    json scores = json::array();
    for (const GaugeScore& s : report.scan_scores)
        scores.push_back({{"gauge", s.gauge_id},
                          {"score", s.score},
                          {"n_gs_scan", s.n_gs_scan}});
    j["scan_scores"] = std::move(scores);
    j["selected_gauges"] = report.selected_gauges;
    if (report.second_je)
        j["second_je"] = *report.second_je;
    else
        j["second_je"] = nullptr;
    j["extensive"] = report.extensive;
    if (report.extensive) {
        j["reference_energy"] = report.reference_energy;
        json stats = json::array();
        for (const ExtensiveStat& s : report.extensive_stats) {
            json e = {{"gauge", s.gauge_id},
                      {"reads_used", s.reads_used},
                      {"n_gs", s.n_gs},
                      {"p_s", s.p_s},
                      {"best_energy", s.best_energy}};
            if (s.r99_reps)
                e["r99"] = *s.r99_reps;
            else
                e["r99"] = nullptr;  // unbounded: no ground state observed
            stats.push_back(std::move(e));
        }
        j["extensive_stats"] = std::move(stats);
    }
    return j.dump(2) + "\n";
}

std::string containment_json(const ContainmentTable& table) {
    json j;
    j["n_gauges"] = table.n_gauges;
    j["top_k"] = table.top_k;
    j["n_total"] = table.n_total;
    j["n_experiments"] = table.n_experiments;
    json rows = json::array();
    for (const ContainmentRow& r : table.rows)
        rows.push_back({{"method", r.method},
                        {"n_reads", r.n_reads},
                        {"fractions", r.fractions}});
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

// --- result store ----------------------------------------------------------

ResultStore::ResultStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    namespace fs = std::filesystem;
    fs::create_directories(dir_);
    for (const char* sub : {"readouts", "scores", "ranks", "reports"})
        fs::create_directories(dir_ / sub);
}

std::uint64_t content_fnv(const std::string& content) {
    return fnv1a64(content);
}

std::filesystem::path ResultStore::emit(const std::string& category,
                                        const std::string& command,
                                        std::uint64_t seed,
                                        const std::string& extension,
                                        const std::string& content,
                                        const std::string& config_echo) {
    namespace fs = std::filesystem;
    const auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();
    std::string stem =
        command + "-" + std::to_string(seed) + "-" + std::to_string(millis);
    fs::path path = dir_ / category / (stem + "." + extension);
    for (int k = 2; fs::exists(path); ++k)
        path = dir_ / category / (stem + "." + std::to_string(k) + "." + extension);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write artifact: " + path.string());
    out << content;
    out.close();

    const fs::path manifest_path = dir_ / "manifest.json";
    json manifest = json::array();
    if (fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        try {
            manifest = json::parse(in);
        } catch (const json::exception&) {
            manifest = json::array();
        }
    }
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(content_fnv(content)));
    manifest.push_back({{"command", command},
                        {"config", config_echo},
                        {"seed", seed},
                        {"path", fs::relative(path, dir_).string()},
                        {"content_fnv", hash_hex}});
    std::ofstream mout(manifest_path, std::ios::binary);
    mout << manifest.dump(2) << "\n";
    return path;
}

}  // namespace anneal
