#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabcanon/align.hpp"
#include "tabcanon/canon.hpp"
#include "tabcanon/ingest.hpp"
#include "tabcanon/metrics.hpp"
#include "tabcanon/qc.hpp"
#include "tabcanon/spatial.hpp"

namespace tabcanon {

struct PipelineOptions {
  AlignOptions align;
  CompletionRule rule = CompletionRule::EdgeSplit;
  QcThresholds qc;
  int jobs = 1;
};

/// One table on disk: `<name>.html` or `<name>.table.json`, with
/// `<name>.tokens.json` and optionally `<name>.words.json` beside it.
struct TableInput {
  std::string name;
  std::filesystem::path table;
  std::filesystem::path tokens;
  std::optional<std::filesystem::path> words;
};

/// Inputs found in `dir`, sorted by name. Throws IoError when `dir` is not
/// a readable directory or a table has no token file.
std::vector<TableInput> discover_inputs(const std::filesystem::path& dir);

struct TableOutcome {
  std::string name;
  std::vector<std::string> reasons;  // empty means accepted
  std::string detail;                // message of the stage that rejected the table
  std::optional<CanonReport> canon;
  std::optional<QcReport> qc;
  std::optional<TableAnnotation> table;            // canonical, completed
  std::optional<std::vector<AnnotatedObject>> objects;  // dilated, accepted tables only

  bool accepted() const noexcept { return reasons.empty(); }
};

/// align -> complete -> canonicalize -> complete -> QC -> dilate.
/// Structural problems become rejection reasons; nothing here throws.
TableOutcome process_table(const std::string& name, const TableAnnotation& table, const TokenSequence& tokens,
                           const TokenSequence& words, const PipelineOptions& options = {});

struct Manifest {
  int accepted = 0;
  int rejected = 0;
  std::map<std::string, int> reasons;
  std::vector<TableOutcome> tables;  // input order
};

/// Loads and processes every input, `options.jobs` at a time. Markup errors
/// are rejections; I/O and schema errors propagate (first failing input wins).
Manifest run_pipeline(const std::vector<TableInput>& inputs, const PipelineOptions& options = {});

/// Writes `<name>.table.json`, `<name>.objects.json` (accepted only) and
/// `<name>.report.json` per table, and `manifest.json`.
void write_pipeline_outputs(const Manifest& manifest, const std::filesystem::path& out_dir);

std::string manifest_to_json(const Manifest& manifest);
std::string canon_report_to_json(const CanonReport& report);
std::string qc_report_to_json(const QcReport& report);
std::string alignment_report_to_json(const TextAlignment& alignment);

/// Survey over every table (`.html` or `.json` other than token/object files) in `dir`.
SurveyCounts survey_directory(const std::filesystem::path& dir, int jobs = 1);

enum class Metric { GritsTop, GritsCont, GritsLoc, Adjacency, Accuracy };

std::string_view metric_name(Metric m) noexcept;            // grits-top, ...
std::string_view metric_column(Metric m) noexcept;          // GriTS_Top, ...
std::optional<Metric> parse_metric(std::string_view name) noexcept;

struct ScoreRow {
  std::string category;  // Simple, Complex or All
  int tables = 0;
  std::map<Metric, double> values;
};

struct ScorePair {
  TableAnnotation truth;
  TableAnnotation predicted;
};

/// Mean per-table metrics, split by whether the ground truth is complex.
std::vector<ScoreRow> score_pairs(const std::vector<ScorePair>& pairs, const std::vector<Metric>& metrics,
                                  int jobs = 1);

/// Pairs `<gt>/<name>` with `<pred>/<name>` by file name. With `tokens`,
/// predictions are tightened to the tokens in `<tokens>/<stem>.tokens.json`
/// before location scoring.
std::vector<ScorePair> load_score_pairs(const std::filesystem::path& gt, const std::filesystem::path& pred,
                                        const std::optional<std::filesystem::path>& tokens = std::nullopt);

std::string score_rows_to_csv(const std::vector<ScoreRow>& rows, const std::vector<Metric>& metrics);
std::string score_rows_to_json(const std::vector<ScoreRow>& rows, const std::vector<Metric>& metrics);

}  // namespace tabcanon
