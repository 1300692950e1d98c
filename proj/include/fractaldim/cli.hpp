#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fractaldim/attractor.hpp"
#include "fractaldim/bounds.hpp"

namespace fractaldim {

/** Malformed invocation or config file; maps to exit code 1. */
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SweepConfig {
    double t_min = 0.0;
    double t_max = 1.0;
    int steps = 50;  // number of samples, >= 2
};

struct EstimatorConfig {
    CloudMode mode = CloudMode::chaos_game;
    long long samples = 2'000'000;  // chaos_game
    long long depth = 10;           // deterministic_cylinders
    std::vector<double> scales;
    std::uint64_t seed = 1;
    bool drop_two_coarsest = false;
    std::vector<int> sigma_depths;  // optional cylinder-volume decay probe
    std::vector<int> track_word;
};

struct JobConfig {
    SystemSpec system;
    BoundParams params;
    bool delta_given = false;  // explicit values bypass the derived defaults
    bool rho_given = false;
    std::optional<SweepConfig> sweep;
    std::optional<EstimatorConfig> estimator;
    std::string out_dir = "out";
};

/** Parses a JSON job description. Throws UsageError on unreadable files,
 * malformed JSON or missing/ill-typed fields. */
JobConfig load_config(const std::string& path);

/** Everything the commands share: validation outcome, derivative data, the
 * parameter set after defaulting, and the assembled bounds report. */
struct AnalysisBundle {
    ValidationReport validation;
    DerivativeStats stats;
    BoundParams params;  // delta/rho defaults resolved, overrides applied
    BoundsReport report;
};

/** Runs validate + derivative_stats, resolves defaulted delta/rho
 * (delta = min(0.1, delta1/2), rho = min(0.1, inf_Jf/10)), applies the
 * sigma override to both interval endpoints, and assembles the full report.
 * Geometric violations do not throw; they are left in `validation` for the
 * caller to grade. */
AnalysisBundle analyze_system(const JobConfig& cfg, std::optional<double> sigma_override);

/** First violation severe enough to abort a command (overlapping branch
 * images or images escaping the cube); nullptr when only border-touching
 * warnings are present. */
const Violation* fatal_violation(const ValidationReport& vr);

// Command drivers. Each writes its artifacts under cfg.out_dir and mirrors
// the human-readable report on stdout. Returned value is the process exit
// code: 0 success, 2 validation failure, 3 numeric/domain failure.
int cmd_analyze(const JobConfig& cfg, std::optional<double> sigma_override);
int cmd_sweep(const JobConfig& cfg, std::optional<double> sigma_override);
int cmd_boxdim(const JobConfig& cfg);
int cmd_invert(const JobConfig& cfg, std::optional<double> sigma_override, double target);

/** Full argv-level entry point used by the binary (and by tests). */
int run_cli(const std::vector<std::string>& args);

}  // namespace fractaldim
