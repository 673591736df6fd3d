#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "tabcanon/assemble.hpp"
#include "tabcanon/pipeline.hpp"

namespace fs = std::filesystem;
using namespace tabcanon;

namespace {

void emit(const std::string& out, const std::string& contents) {
  if (out.empty() || out == "-") {
    std::cout << contents;
  } else {
    write_file(out, contents);
  }
}

std::string survey_csv(const SurveyCounts& s) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(2);
  ss << "investigated,with_prh,oversegmented,pct_of_prh,pct_of_investigated\n"
     << s.investigated << "," << s.with_prh << "," << s.oversegmented << "," << s.pct_of_prh() << ","
     << s.pct_of_investigated() << "\n";
  return ss.str();
}

std::string survey_json(const SurveyCounts& s) {
  std::ostringstream ss;
  ss << "{\n  \"investigated\": " << s.investigated << ",\n  \"with_prh\": " << s.with_prh
     << ",\n  \"oversegmented\": " << s.oversegmented << ",\n  \"pct_of_prh\": " << s.pct_of_prh()
     << ",\n  \"pct_of_investigated\": " << s.pct_of_investigated() << "\n}\n";
  return ss.str();
}

std::string manifest_csv(const Manifest& m) {
  std::string out = "name,accepted,reasons\n";
  for (const auto& t : m.tables) {
    std::string reasons;
    for (const auto& r : t.reasons) reasons += (reasons.empty() ? "" : ";") + r;
    out += t.name + "," + (t.accepted() ? "true" : "false") + "," + reasons + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Table structure annotation toolkit"};
  app.set_config("--config", "", "Read option values from a key = value file");
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  int jobs = 1;
  AlignOptions align;
  QcThresholds qc;
  std::string row_rule = "edge-split";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 256));

  auto add_align_flags = [&](CLI::App* sub) {
    sub->add_option("--match", align.scores.match, "Alignment match score");
    sub->add_option("--mismatch", align.scores.mismatch, "Alignment mismatch score");
    sub->add_option("--gap", align.scores.gap, "Alignment gap score");
    sub->add_option("--band", align.band, "Alignment band half-width (0 = unbanded)");
  };
  auto add_rule_flag = [&](CLI::App* sub) {
    sub->add_option("--row-rule", row_rule, "Row/column extent rule")
        ->check(CLI::IsMember({"edge-split", "union"}));
  };
  auto add_qc_flags = [&](CLI::App* sub) {
    sub->add_option("--max-edit", qc.max_edit_distance, "Maximum mean cell edit distance");
    sub->add_option("--min-containment", qc.min_word_containment, "Minimum mean word containment");
    sub->add_option("--max-objects", qc.max_objects, "Maximum object count");
  };
  auto rule = [&] { return row_rule == "union" ? CompletionRule::Union : CompletionRule::EdgeSplit; };

  std::string input, output, report, tokens_path, words_path;

  auto* align_cmd = app.add_subcommand("align", "Attach text boxes to cells from page tokens");
  align_cmd->add_option("table", input, "Table (.json or .html)")->required();
  align_cmd->add_option("--tokens", tokens_path, "Page tokens")->required();
  align_cmd->add_option("-o,--output", output, "Output table");
  align_cmd->add_option("--report", report, "Alignment report");
  add_align_flags(align_cmd);

  auto* complete_cmd = app.add_subcommand("complete", "Derive table, row, column and grid-cell boxes");
  complete_cmd->add_option("table", input, "Table with text boxes")->required();
  complete_cmd->add_option("-o,--output", output, "Output table");
  add_rule_flag(complete_cmd);

  auto* canon_cmd = app.add_subcommand("canonicalize", "Infer headers and merge oversegmented cells");
  canon_cmd->add_option("table", input, "Table (.json or .html)")->required();
  canon_cmd->add_option("-o,--output", output, "Output table");
  canon_cmd->add_option("--report", report, "Canonicalization report");

  auto* qc_cmd = app.add_subcommand("qc", "Run the quality-control filters on a completed table");
  qc_cmd->add_option("table", input, "Completed table")->required();
  qc_cmd->add_option("--tokens", tokens_path, "Page tokens for the edit-distance filter")->required();
  qc_cmd->add_option("--words", words_path, "Page words for the containment filter (default: --tokens)");
  qc_cmd->add_option("--report", report, "QC report (default: stdout)");
  add_qc_flags(qc_cmd);

  std::string table_out;
  auto* dilate_cmd = app.add_subcommand("dilate", "Emit dilated structure objects of a completed table");
  dilate_cmd->add_option("table", input, "Completed table")->required();
  dilate_cmd->add_option("-o,--output", output, "Objects JSON");
  dilate_cmd->add_option("--table-out", table_out, "Also write the dilated table");

  std::string survey_dir;
  auto* survey_cmd = app.add_subcommand("survey", "Count tables with oversegmented projected row headers");
  survey_cmd->add_option("dir", survey_dir, "Directory of tables")->required()->check(CLI::ExistingDirectory);
  survey_cmd->add_option("-o,--output", output, "Report");

  std::string gt_dir, pred_dir, score_tokens;
  std::string metrics_list = "grits-top,grits-cont,grits-loc,adjacency,accuracy";
  auto* score_cmd = app.add_subcommand("score", "Score predicted tables against ground truth");
  score_cmd->add_option("--gt", gt_dir, "Ground-truth tables")->required()->check(CLI::ExistingDirectory);
  score_cmd->add_option("--pred", pred_dir, "Predicted tables, same file names")->required()->check(CLI::ExistingDirectory);
  score_cmd->add_option("--metrics", metrics_list, "Comma-separated metrics");
  score_cmd->add_option("--tokens", score_tokens, "Token directory; predictions are tightened before scoring");
  score_cmd->add_option("-o,--output", output, "Report");

  auto* assemble_cmd = app.add_subcommand("assemble", "Build a table from structure objects and tokens");
  assemble_cmd->add_option("objects", input, "Objects JSON")->required();
  assemble_cmd->add_option("--tokens", tokens_path, "Page tokens")->required();
  assemble_cmd->add_option("-o,--output", output, "Output table");
  assemble_cmd->add_option("--report", report, "Suppressions and structural violations");

  std::string pipeline_dir, out_dir;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "align, complete, canonicalize, QC and dilate a directory");
  pipeline_cmd->add_option("dir", pipeline_dir, "Input directory")->required();
  pipeline_cmd->add_option("-o,--output", out_dir, "Output directory")->required();
  add_align_flags(pipeline_cmd);
  add_rule_flag(pipeline_cmd);
  add_qc_flags(pipeline_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*align_cmd) {
      const auto result = align_table_text(load_table_any(input), load_tokens(tokens_path), align);
      emit(output, table_to_json_text(result.table));
      if (!report.empty()) write_file(report, alignment_report_to_json(result));
    } else if (*complete_cmd) {
      emit(output, table_to_json_text(complete(load_table_any(input), rule())));
    } else if (*canon_cmd) {
      const auto result = canonicalize(load_table_any(input));
      emit(output, table_to_json_text(result.table));
      if (!report.empty()) write_file(report, canon_report_to_json(result.report));
    } else if (*qc_cmd) {
      const TableAnnotation t = load_table_any(input);
      const TokenSequence chars = load_tokens(tokens_path);
      const TokenSequence words = words_path.empty() ? chars : load_tokens(words_path);
      emit(report, qc_report_to_json(run_qc(t, chars, words, qc)));
    } else if (*dilate_cmd) {
      const TableAnnotation t = load_table_any(input);
      emit(output, objects_to_json_text(dilate(t)));
      if (!table_out.empty()) save_table(dilate_table(t), table_out);
    } else if (*survey_cmd) {
      const SurveyCounts s = survey_directory(survey_dir, jobs);
      emit(output, format == "csv" ? survey_csv(s) : survey_json(s));
    } else if (*score_cmd) {
      std::vector<Metric> metrics;
      std::stringstream ss(metrics_list);
      for (std::string name; std::getline(ss, name, ',');) {
        const auto m = parse_metric(name);
        if (!m) throw CLI::ValidationError("--metrics", "unknown metric '" + name + "'");
        metrics.push_back(*m);
      }
      const auto pairs = load_score_pairs(gt_dir, pred_dir,
                                          score_tokens.empty() ? std::nullopt : std::optional<fs::path>(score_tokens));
      const auto rows = score_pairs(pairs, metrics, jobs);
      emit(output, format == "csv" ? score_rows_to_csv(rows, metrics) : score_rows_to_json(rows, metrics));
    } else if (*assemble_cmd) {
      const Assembly a = assemble(load_objects(input), load_tokens(tokens_path));
      emit(output, table_to_json_text(a.table));
      if (!report.empty()) {
        std::ostringstream r;
        r << "{\n  \"suppressed\": [";
        for (std::size_t i = 0; i < a.suppressed.size(); ++i) {
          r << (i ? "," : "") << "\n    {\"category\": \"" << category_name(a.suppressed[i].object.category)
            << "\", \"reason\": \"" << a.suppressed[i].reason << "\"}";
        }
        r << (a.suppressed.empty() ? "" : "\n  ") << "],\n  \"violations\": [";
        for (std::size_t i = 0; i < a.violations.size(); ++i) {
          r << (i ? "," : "") << "\n    {\"kind\": \"" << violation_name(a.violations[i].kind)
            << "\", \"row\": " << a.violations[i].row << ", \"col\": " << a.violations[i].col << "}";
        }
        r << (a.violations.empty() ? "" : "\n  ") << "]\n}\n";
        write_file(report, r.str());
      }
    } else if (*pipeline_cmd) {
      PipelineOptions opts{align, rule(), qc, jobs};
      const Manifest m = run_pipeline(discover_inputs(pipeline_dir), opts);
      write_pipeline_outputs(m, out_dir);
      if (format == "csv") {
        std::cout << manifest_csv(m);
      } else {
        std::cout << manifest_to_json(m);
      }
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
