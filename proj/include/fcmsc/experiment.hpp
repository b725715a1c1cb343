#pragma once

// Monte Carlo experiment harness: data, methods, trials, reports, exports.

#include "fcmsc/dataset.hpp"
#include "fcmsc/eval.hpp"
#include "fcmsc/graph.hpp"
#include "fcmsc/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fcmsc {

enum class Method { lrr_bsv, lrr_fc, fcmsc, grfcmsc };

std::string to_string(Method m);
Method parse_method(const std::string& name);  ///< "LRR_BSV", "LRR_FC", "FCMSC", "grFCMSC"

struct FileSource {
    std::vector<std::filesystem::path> views;
    std::optional<std::filesystem::path> labels;
    bool header = false;
};

struct SyntheticSource {
    SyntheticSpec spec;
    /// Draw a fresh dataset per trial with seed spec.seed + trial.
    bool resample = true;
};

struct ExperimentConfig {
    std::optional<FileSource> files;
    std::optional<SyntheticSource> synthetic;
    std::vector<Method> methods{Method::fcmsc};
    SolverConfig solver;
    /// Per-method overrides of `solver`. The LRR baselines read their nuclear
    /// weight from lambda2.
    std::map<Method, SolverConfig> method_solver;
    GraphParams graph;
    KMeansOptions kmeans;
    int clusters = 0;  ///< 0 = number of distinct ground-truth labels
    int trials = 30;
    std::uint64_t base_seed = 0;
    std::optional<std::filesystem::path> out_dir;
    int threads = 1;
    bool save_states = false;

    SolverConfig solver_for(Method m) const;
    /// Throws ConfigError on a broken invariant.
    void validate() const;
};

/// Parses the JSON config schema documented in the README. Relative data
/// paths resolve against `base_dir`. Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

struct TrialOutcome {
    int trial = 0;
    std::uint64_t seed = 0;
    MetricTriple metrics;
    int iterations = 0;
    bool converged = false;
    Residuals residuals;
    int best_view = -1;  ///< LRR_BSV only: view chosen by NMI
    double seconds = 0.0;
};

struct MethodReport {
    Method method = Method::fcmsc;
    std::vector<TrialOutcome> trials;
    bool failed = false;
    std::string error;
    MetricTriple mean;
    MetricTriple stddev;  ///< population standard deviation
};

struct ExperimentReport {
    nlohmann::json config;  ///< echo
    std::vector<MethodReport> methods;
    double seconds = 0.0;

    bool all_failed() const;
    const MethodReport* find(Method m) const;
};

/// Runs every method for `trials` trials with per-trial seed base_seed + t.
/// Stage errors are recorded on the failing method; other methods continue.
/// Writes report.json (and state files when asked) into out_dir if set.
ExperimentReport run_experiment(const ExperimentConfig& config);

nlohmann::json report_to_json(const ExperimentReport& report, bool include_timings = true);
std::string report_table(const ExperimentReport& report);

/// mean and population standard deviation of one metric column.
void aggregate(MethodReport& report);

// Parameter sweeps over lambda grids.

struct SweepAxis {
    std::string name;  ///< lambda1, lambda2 or lambda3
    std::vector<double> values;
};

/// "lambda1=1,10,100" -> axis. Throws ConfigError on bad syntax.
SweepAxis parse_sweep(const std::string& spec);

struct SweepCell {
    std::map<std::string, double> params;
    ExperimentReport report;
};

/// Cartesian product of the axes; every cell overrides the named lambdas for
/// all methods. With out_dir set, cell i writes into out_dir/sweep_<i>/.
std::vector<SweepCell> run_sweep(const ExperimentConfig& config,
                                 const std::vector<SweepAxis>& axes);

// Solver state files and matrix export.

enum class Exportable { z, c, ex, ez, affinity };

std::set<Exportable> parse_exportables(const std::string& csv_list);  ///< "Z,C,E_x,E_z,affinity"
std::string to_string(Exportable e);

void save_state(const SolverState& state, const std::filesystem::path& path);
SolverState load_state(const std::filesystem::path& path);

/// Writes each requested matrix as CSV into `dir` and returns the written
/// paths. The affinity is (|C| + |C^T|) / 2.
std::vector<std::filesystem::path> export_matrices(const SolverState& state,
                                                   const std::set<Exportable>& which,
                                                   const std::filesystem::path& dir);

} // namespace fcmsc
