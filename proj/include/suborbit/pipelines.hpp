#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "suborbit/config.hpp"
#include "suborbit/construct.hpp"
#include "suborbit/decomposition.hpp"
#include "suborbit/function_space.hpp"

namespace suborbit {

/// Command-line / config-independent knobs of a single pipeline run.
struct RunOptions {
    std::string out_dir = ".";
    int jobs = 1;
    std::optional<std::int64_t> trunc; // overrides [run].N
    std::uint64_t seed = 0x5eed5eedULL;
};

struct PipelineResult {
    bool all_pass = false;
    std::string summary;
    std::vector<std::string> schedule_csv; // with header line
    std::vector<std::string> errors_csv;
};

/// Runs the named pipeline (finite | localized | function | gabor |
/// decomposition) from a parsed config. Throws on invalid configs.
PipelineResult run_pipeline(const std::string& pipeline, const KeyValueConfig& cfg,
                            const RunOptions& options);

/// Writes schedule.csv, errors.csv, summary.txt under options.out_dir.
/// Returns 0 when every per-k check passed, 1 otherwise.
int run_pipeline_to_files(const std::string& pipeline, const KeyValueConfig& cfg,
                          const RunOptions& options);

/// Fixed 17-significant-digit float formatting shared by every report.
std::string format_float(double v);

// Building blocks the CLI pipelines are assembled from. Exposed for tests
// and for callers who want the objects rather than the files.

WeightedLpSpace space_from_config(const KeyValueConfig& cfg);
std::vector<SeqVector> family_from_config(const KeyValueConfig& cfg,
                                          const WeightedLpSpace& space, std::int64_t K);

/// Sparse family file: lines "k,index,value" (1-based k up to K).
std::vector<SeqVector> load_family_csv(const std::string& path, std::int64_t K);

ErrorBudget budget_from_config(const KeyValueConfig& cfg, const WeightedLpSpace& space);

std::vector<std::string> schedule_csv_lines(const PowerSchedule& schedule);
std::vector<std::string> error_csv_lines(const ErrorReport& report);
std::vector<std::string> error_csv_lines(const FunctionReport& report);

} // namespace suborbit
