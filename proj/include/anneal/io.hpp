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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "anneal/chimera.hpp"
#include "anneal/embedding.hpp"
#include "anneal/pipeline.hpp"
#include "anneal/sampler.hpp"

namespace anneal {

/// Reals are printed with 17 significant digits so round-trips are
/// bit-exact.
std::string format_real(double v);

// --- instance format -------------------------------------------------------
// comment lines start with '#'; first data line is
//   p ising <n> <n_h_terms> <n_J_terms> <offset>
// followed by "<i> <h_i>" lines (nonzero fields) and "<i> <j> <J_ij>" lines
// with i < j. A JSON mirror of the same schema is accepted everywhere a
// text instance is.

std::string write_instance(const IsingProblem& p,
                           const std::vector<std::string>& comments = {});
std::string write_instance_json(const IsingProblem& p);
IsingProblem read_instance(std::istream& in);
IsingProblem read_instance_file(const std::filesystem::path& path);

// --- hardware graph --------------------------------------------------------
// header "chimera M N L n_broken", then one "u v" line per edge, then one
// broken id per line.

std::string write_graph(const HardwareGraph& g);
HardwareGraph read_graph(std::istream& in);
HardwareGraph read_graph_file(const std::filesystem::path& path);

// --- embedding -------------------------------------------------------------
// JSON object mapping logical var id -> array of hardware qubit ids.

std::string write_embedding(const Embedding& emb);
Embedding read_embedding(std::istream& in);
Embedding read_embedding_file(const std::filesystem::path& path);

// --- readouts --------------------------------------------------------------
// CSV "batch,read,energy_device,spins" with spins encoded as a +/- string;
// the JSON sidecar records config, noise and seeds.

std::string write_readouts_csv(const ReadoutSet& reads);
std::string write_readouts_meta(const ReadoutSet& reads,
                                const SamplerConfig& config,
                                const NoiseModel& noise);

struct ReadoutsFile {
    std::vector<std::int32_t> batch;
    std::vector<double> energies;
    std::vector<SpinConfig> spins;

    std::vector<EnergyBatch> as_batches() const;
};
ReadoutsFile read_readouts_csv(std::istream& in);
ReadoutsFile read_readouts_file(const std::filesystem::path& path);

// --- result CSV shapes -----------------------------------------------------

struct ScoreRow {
    std::string spec_id;
    double score = 0.0;
    bool has_score = true;  // greedy ranks carry no score value
    std::int32_t rank = 0;
    long long n_reads = 0;
    std::int32_t n_reps = 1;
    double epsilon = 0.0;
};

/// "spec_id,score,rank,n_reads,n_reps,epsilon"
std::string write_scores_csv(const std::vector<ScoreRow>& rows);

/// "J_E,f_SE,elite_score"
std::string write_je_curve_csv(const std::vector<JeScanPoint>& points);

/// "gauge,score,n_gs,rank" -- n_gs counts hits at the best energy observed
/// across the scan.
std::string write_gauge_csv(const GaugeScanResult& scan);

/// "count_type,spearman_rho,degenerate"
std::string write_correlation_csv(const std::vector<CouplerCorrelation>& rows);

/// "method,n_reads,any_top_1,...,any_top_k"
std::string write_containment_csv(const ContainmentTable& table);

std::string tune_report_json(const TuneReport& report);
std::string containment_json(const ContainmentTable& table);

// --- result store ----------------------------------------------------------

/// Output directory with readouts/, scores/, ranks/, reports/ subfolders and
/// an append-only manifest.json listing every artifact with its config hash
/// and content hash. File names are <command>-<seed>-<millis>[.k].<ext>; the
/// content of every artifact depends only on flags and seeds.
class ResultStore {
  public:
    explicit ResultStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }

    /// Write an artifact and record it in the manifest. `category` picks the
    /// subdirectory.
    std::filesystem::path emit(const std::string& category,
                               const std::string& command, std::uint64_t seed,
                               const std::string& extension,
                               const std::string& content,
                               const std::string& config_echo);

  private:
    std::filesystem::path dir_;
};

std::uint64_t content_fnv(const std::string& content);

}  // namespace anneal
