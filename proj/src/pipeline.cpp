#include "tabcanon/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace tabcanon {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The exception of the
// lowest failing index is rethrown, so errors do not depend on scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  if (threads == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_sidecar(const std::string& file) {
  return ends_with(file, ".tokens.json") || ends_with(file, ".words.json") || ends_with(file, ".objects.json") ||
         ends_with(file, ".report.json") || file == "manifest.json";
}

bool is_table_file(const std::string& file) {
  if (ends_with(file, ".html") || ends_with(file, ".htm")) return true;
  return ends_with(file, ".json") && !is_sidecar(file);
}

std::string table_stem(const std::string& file) {
  for (std::string_view suffix : {".table.json", ".json", ".html", ".htm"}) {
    if (ends_with(file, suffix)) return file.substr(0, file.size() - suffix.size());
  }
  return file;
}

std::vector<std::string> sorted_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<std::string> files;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file(ec)) files.push_back(it->path().filename().string());
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());
  return files;
}

json box_json(const BBox& b) { return json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

json canon_json(const CanonReport& r) {
  return {{"changed", r.changed},
          {"merges_performed", r.merges_performed},
          {"header_rows_added", r.header_rows_added},
          {"prh_rows", r.prh_rows},
          {"prh_labels_added", r.prh_labels_added},
          {"blank_cells_split", r.blank_cells_split},
          {"body_blank_cells_split", r.body_blank_cells_split},
          {"row_header_cells_added", r.row_header_cells_added},
          {"flags_changed", r.flags_changed},
          {"uncanonicalizable", r.uncanonicalizable}};
}

json qc_json(const QcReport& r) {
  json reasons = json::array();
  for (QcReason q : r.reasons) reasons.push_back(std::string(reason_name(q)));
  return {{"verdict", r.accepted() ? "accept" : "reject"},
          {"reasons", reasons},
          {"overlap_ok", r.overlap_ok},
          {"mean_cell_edit_distance", r.mean_cell_edit_distance},
          {"mean_word_containment", r.mean_word_containment},
          {"no_words_in_table", r.no_words_in_table},
          {"object_count", r.object_count}};
}

json outcome_json(const TableOutcome& t) {
  json j{{"name", t.name}, {"accepted", t.accepted()}, {"reasons", t.reasons}};
  if (!t.detail.empty()) j["detail"] = t.detail;
  if (t.canon) j["canonicalization"] = canon_json(*t.canon);
  if (t.qc) j["qc"] = qc_json(*t.qc);
  return j;
}

}  // namespace

std::vector<TableInput> discover_inputs(const fs::path& dir) {
  const auto files = sorted_files(dir);
  std::vector<TableInput> out;
  for (const auto& f : files) {
    if (!is_table_file(f)) continue;
    TableInput in;
    in.name = table_stem(f);
    in.table = dir / f;
    in.tokens = dir / (in.name + ".tokens.json");
    if (!fs::exists(in.tokens)) throw IoError("missing token file " + in.tokens.string());
    const fs::path words = dir / (in.name + ".words.json");
    if (fs::exists(words)) in.words = words;
    out.push_back(std::move(in));
  }
  return out;
}

TableOutcome process_table(const std::string& name, const TableAnnotation& table, const TokenSequence& tokens,
                           const TokenSequence& words, const PipelineOptions& options) {
  TableOutcome out;
  out.name = name;
  auto reject = [&](std::string reason, const std::exception& e) {
    out.reasons.push_back(std::move(reason));
    out.detail = e.what();
    return out;
  };
  auto complete_or_reject = [&](const TableAnnotation& t) -> std::optional<TableAnnotation> {
    try {
      return complete(t, options.rule);
    } catch (const UndefinedExtentError& e) {
      reject("undefined_extent", e);
    } catch (const MissingBoxesError& e) {
      reject("missing_boxes", e);
    }
    return std::nullopt;
  };

  TableAnnotation aligned;
  try {
    aligned = align_table_text(table, tokens, options.align).table;
  } catch (const EmptyTokenStreamError& e) {
    return reject("empty_token_stream", e);
  }
  auto completed = complete_or_reject(aligned);
  if (!completed) return out;
  CanonResult canon = canonicalize(*completed);
  out.canon = canon.report;
  auto final_table = complete_or_reject(canon.table);
  if (!final_table) return out;
  out.table = *final_table;

  const TokenSequence& containment_words = words.tokens.empty() ? tokens : words;
  out.qc = run_qc(*final_table, tokens, containment_words, options.qc);
  for (QcReason r : out.qc->reasons) out.reasons.emplace_back(reason_name(r));
  if (!out.accepted()) return out;
  try {
    out.objects = dilate(*final_table);
  } catch (const NonMonotonicError& e) {
    return reject("non_monotonic", e);
  }
  return out;
}

Manifest run_pipeline(const std::vector<TableInput>& inputs, const PipelineOptions& options) {
  Manifest m;
  m.tables.resize(inputs.size());
  parallel_for(inputs.size(), options.jobs, [&](std::size_t i) {
    const TableInput& in = inputs[i];
    const TokenSequence tokens = load_tokens(in.tokens);
    const TokenSequence words = in.words ? load_tokens(*in.words) : TokenSequence{};
    TableAnnotation table;
    try {
      table = load_table_any(in.table);
    } catch (const RaggedGridError& e) {
      m.tables[i] = {in.name, {"ragged_grid"}, in.table.string() + ": " + e.what(), {}, {}, {}, {}};
      return;
    } catch (const MarkupError& e) {
      m.tables[i] = {in.name, {"malformed_markup"}, in.table.string() + ": " + e.what(), {}, {}, {}, {}};
      return;
    }
    m.tables[i] = process_table(in.name, table, tokens, words, options);
  });
  for (const auto& t : m.tables) {
    if (t.accepted()) {
      ++m.accepted;
    } else {
      ++m.rejected;
      for (const auto& r : t.reasons) ++m.reasons[r];
    }
  }
  return m;
}

std::string manifest_to_json(const Manifest& m) {
  json reasons = json::object();
  for (const auto& [k, v] : m.reasons) reasons[k] = v;
  json tables = json::array();
  for (const auto& t : m.tables) tables.push_back({{"name", t.name}, {"accepted", t.accepted()}, {"reasons", t.reasons}});
  json doc{{"accepted", m.accepted}, {"rejected", m.rejected}, {"reasons", reasons}, {"tables", tables}};
  return doc.dump(2) + "\n";
}

std::string canon_report_to_json(const CanonReport& report) { return canon_json(report).dump(2) + "\n"; }

std::string qc_report_to_json(const QcReport& report) { return qc_json(report).dump(2) + "\n"; }

std::string alignment_report_to_json(const TextAlignment& a) {
  json cells = json::array();
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    const Cell& c = a.table.cells[k];
    json cell{{"row_start", c.row_start},
              {"col_start", c.col_start},
              {"characters", a.cells[k].characters},
              {"aligned", a.cells[k].aligned},
              {"matched", a.cells[k].matched},
              {"match_fraction", a.cells[k].match_fraction}};
    if (c.text_box) cell["text_bbox"] = box_json(*c.text_box);
    cells.push_back(std::move(cell));
  }
  json doc{{"score", a.score},
           {"unboxed_cells", a.unboxed_cells},
           {"unmatched_tokens", a.unmatched_tokens},
           {"cells", cells}};
  return doc.dump(2) + "\n";
}

void write_pipeline_outputs(const Manifest& manifest, const fs::path& out_dir) {
  for (const auto& t : manifest.tables) {
    if (t.table) save_table(*t.table, out_dir / (t.name + ".table.json"));
    if (t.objects) save_objects(*t.objects, out_dir / (t.name + ".objects.json"));
    write_file(out_dir / (t.name + ".report.json"), outcome_json(t).dump(2) + "\n");
  }
  write_file(out_dir / "manifest.json", manifest_to_json(manifest));
}

SurveyCounts survey_directory(const fs::path& dir, int jobs) {
  std::vector<fs::path> paths;
  for (const auto& f : sorted_files(dir)) {
    if (is_table_file(f)) paths.push_back(dir / f);
  }
  std::vector<SurveyCounts> counts(paths.size());
  parallel_for(paths.size(), jobs, [&](std::size_t i) {
    try {
      counts[i] = survey_table(load_table_any(paths[i]));
    } catch (const MarkupError&) {
      // unparsable markup is not investigated
    }
  });
  SurveyCounts total;
  for (const auto& c : counts) total += c;
  return total;
}

std::string_view metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::GritsTop: return "grits-top";
    case Metric::GritsCont: return "grits-cont";
    case Metric::GritsLoc: return "grits-loc";
    case Metric::Adjacency: return "adjacency";
    case Metric::Accuracy: return "accuracy";
  }
  return "";
}

std::string_view metric_column(Metric m) noexcept {
  switch (m) {
    case Metric::GritsTop: return "GriTS_Top";
    case Metric::GritsCont: return "GriTS_Cont";
    case Metric::GritsLoc: return "GriTS_Loc";
    case Metric::Adjacency: return "Adj_Cont";
    case Metric::Accuracy: return "Acc_Cont";
  }
  return "";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
  for (Metric m : {Metric::GritsTop, Metric::GritsCont, Metric::GritsLoc, Metric::Adjacency, Metric::Accuracy}) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<ScoreRow> score_pairs(const std::vector<ScorePair>& pairs, const std::vector<Metric>& metrics, int jobs) {
  std::vector<std::map<Metric, double>> per(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    const auto& [truth, pred] = pairs[i];
    for (Metric m : metrics) {
      double v = 0.0;
      switch (m) {
        case Metric::GritsTop: v = grits(truth, pred, GritsVariant::Topology); break;
        case Metric::GritsCont: v = grits(truth, pred, GritsVariant::Content); break;
        case Metric::GritsLoc: v = grits(truth, pred, GritsVariant::Location); break;
        case Metric::Adjacency: v = adjacency_fscore(truth, pred).f; break;
        case Metric::Accuracy: v = contents_match(truth, pred) ? 1.0 : 0.0; break;
      }
      per[i][m] = v;
    }
  });
  std::vector<ScoreRow> rows{{"Simple", 0, {}}, {"Complex", 0, {}}, {"All", 0, {}}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ScoreRow& group = rows[is_complex(pairs[i].truth) ? 1 : 0];
    for (ScoreRow* r : {&group, &rows[2]}) {
      ++r->tables;
      for (const auto& [m, v] : per[i]) r->values[m] += v;
    }
  }
  for (auto& r : rows) {
    for (Metric m : metrics) r.values[m] = r.tables ? r.values[m] / r.tables : 0.0;
  }
  return rows;
}

std::vector<ScorePair> load_score_pairs(const fs::path& gt, const fs::path& pred,
                                        const std::optional<fs::path>& tokens) {
  std::vector<ScorePair> out;
  for (const auto& f : sorted_files(gt)) {
    if (!is_table_file(f)) continue;
    const fs::path p = pred / f;
    if (!fs::exists(p)) throw IoError("no prediction for " + (gt / f).string() + " (expected " + p.string() + ")");
    ScorePair pair{load_table_any(gt / f), load_table_any(p)};
    if (tokens && pair.predicted.rows && pair.predicted.columns && pair.predicted.table_box) {
      const TokenSequence toks = load_tokens(*tokens / (table_stem(f) + ".tokens.json"));
      pair.predicted = tighten(pair.predicted, toks).table;
    }
    out.push_back(std::move(pair));
  }
  return out;
}

namespace {

std::string format_value(double v) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(4);
  ss << v;
  return ss.str();
}

}  // namespace

std::string score_rows_to_csv(const std::vector<ScoreRow>& rows, const std::vector<Metric>& metrics) {
  std::string out = "category,tables";
  for (Metric m : metrics) out += "," + std::string(metric_column(m));
  out += "\n";
  for (const auto& r : rows) {
    out += r.category + "," + std::to_string(r.tables);
    for (Metric m : metrics) out += "," + format_value(r.values.at(m));
    out += "\n";
  }
  return out;
}

std::string score_rows_to_json(const std::vector<ScoreRow>& rows, const std::vector<Metric>& metrics) {
  json doc = json::array();
  for (const auto& r : rows) {
    json j{{"category", r.category}, {"tables", r.tables}};
    for (Metric m : metrics) j[std::string(metric_column(m))] = r.values.at(m);
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace tabcanon
