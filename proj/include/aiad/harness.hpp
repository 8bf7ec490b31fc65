#pragma once

// Batch experiments: run matrix over (run index x mode), metric curves,
// paired significance tests and on-disk results.

#include "aiad/daytrip/daytrip.hpp"
#include "aiad/inventory/inventory.hpp"
#include "aiad/modes.hpp"
#include "aiad/planner.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace aiad {

inline constexpr const char* kFormatVersion = "aiad-1";

enum class Domain { daytrip, inventory };
std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);

/// How true anchoring flags are assigned across day-trip runs.
enum class AnchoringPolicy { prior, alternate, always, never };

struct ExperimentSpec {
    std::string name = "experiment";
    Domain domain = Domain::daytrip;
    int runs = 1;
    std::uint64_t seed = 1;
    std::vector<std::string> modes{"aiad", "unassisted"};
    /// Interaction budget; < 0 runs to the domain horizon.
    int budget = 20;
    int max_steps = 100;
    std::size_t particles = 1024;
    PlannerConfig planner;
    PlannerConfig automation;
    int pl_pool = 100;
    AnchoringPolicy anchoring = AnchoringPolicy::prior;
    daytrip::Config daytrip;
    inventory::Config inventory;
    std::string output;
    int threads = 1;

    /// Domain defaults for planners, particles and budgets.
    static ExperimentSpec defaults(Domain d);
    /// Number of points in every metric curve (interaction indices 0..n-1).
    int curve_points() const;
};

void to_json(nlohmann::json& j, const ExperimentSpec& s);
/// Missing keys keep the domain defaults.
ExperimentSpec spec_from_json(const nlohmann::json& j);
/// Reads a JSON spec file; AIAD_SEED in the environment overrides the seed.
ExperimentSpec load_spec(const std::filesystem::path& path);

/// A mode id such as "aiad", "irl_automation@10" or "aiad_no_bias".
struct ModeSpec {
    std::string id;
    ModeKind kind = ModeKind::aiad;
    int irl_demos = 0;
    int pl_queries = 0;
    /// Belief prior variant for ablations; empty for the standard prior.
    std::string ablation;
};
ModeSpec parse_mode(Domain domain, const std::string& id);

/// Per-interaction curves of one (run, mode) pair.
struct RunSeries {
    int run = 0;
    std::string mode;
    bool anchored = false;  // day trip only
    /// Objective (day trip) or cumulative discounted reward (inventory).
    std::vector<double> value;
    std::vector<double> entropy;
    std::vector<double> reward_error;
    /// Acceptance of the advice at interaction k (index k-1); unset when the
    /// interaction was not advised.
    std::vector<std::optional<bool>> accepted;
    double final_value = 0.0;
};

/// Metric curves from logged records; `initial` holds the metric values
/// before the first step.
RunSeries series_from_records(const std::vector<nlohmann::json>& records, const nlohmann::json& initial,
                              Domain domain, int points);

struct ExperimentResult {
    nlohmann::json manifest;
    std::vector<RunSeries> series;
    nlohmann::json summary;
};

/// Runs the matrix and, when spec.output is set, writes manifest.json,
/// runs/*.jsonl, telemetry/*.jsonl, summary.json and summary.csv.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Summary tables: mean +- se of the final value per mode, per-interaction
/// mean curves, and paired Wilcoxon tests of every mode against "aiad".
nlohmann::json summarize(const std::vector<RunSeries>& series, const ExperimentSpec& spec);
std::string summary_csv(const nlohmann::json& summary);

/// Rebuilds series and summary from an output directory.
ExperimentResult summarize_directory(const std::filesystem::path& dir);

/// Re-executes logged runs from the manifest and compares trajectory logs
/// byte for byte.
struct ReplayReport {
    int compared = 0;
    int mismatched = 0;
    std::vector<std::string> messages;
};
ReplayReport replay(const std::filesystem::path& dir, std::optional<int> run = std::nullopt,
                    std::optional<std::string> mode = std::nullopt);

/// Trajectory log of a single (run, mode) pair as JSON lines, exactly as written to disk.
std::string run_log(const ExperimentSpec& spec, int run, const std::string& mode);

}  // namespace aiad
