#include <doctest.h>

#include <filesystem>
#include <random>

#include "support/oracles.hpp"
#include "tabcanon/pipeline.hpp"
#include "tabcanon/synth.hpp"

using namespace tabcanon;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

TableAnnotation sample(int variant) {
  return oracle::grid({{"Name", "Dose", "Age"}, {"alpha" + std::to_string(variant), "10", "31"}, {"beta", "20", "45"}}, 1);
}

void write_fixture(const fs::path& dir, const std::string& name, const TableAnnotation& t, bool corrupt_text) {
  const auto r = render_table(t);
  auto chars = r.chars;
  if (corrupt_text) {
    for (auto& tok : chars.tokens) {
      if (tok.text == "a") tok.text = "o";
    }
  }
  save_table(t, dir / (name + ".table.json"));
  save_tokens(chars, dir / (name + ".tokens.json"));
  save_tokens(r.words, dir / (name + ".words.json"));
}

}  // namespace

TEST_CASE("process_table runs every stage") {
  const auto t = sample(0);
  const auto r = render_table(t);
  const auto out = process_table("t", t, r.chars, r.words);
  CHECK(out.accepted());
  REQUIRE(out.table);
  REQUIRE(out.objects);
  CHECK(out.table->rows.has_value());
  CHECK(out.qc->mean_cell_edit_distance == 0.0);
  CHECK(out.objects->front().category == ObjectCategory::Table);
}

TEST_CASE("process_table turns stage failures into reasons") {
  const auto t = sample(0);
  CHECK(process_table("t", t, {}, {}).reasons == std::vector<std::string>{"empty_token_stream"});
  auto r = render_table(t);
  // tokens for the first row only: later rows get no boxes
  std::erase_if(r.chars.tokens, [](const Token& tok) { return tok.box.y_min > 80; });
  const auto out = process_table("t", t, r.chars, r.words);
  CHECK(out.reasons == std::vector<std::string>{"undefined_extent"});
  CHECK_FALSE(out.detail.empty());
}

TEST_CASE("manifest counts accepted and rejected tables") {
  TempDir dir("tabcanon_pipeline_manifest");
  write_fixture(dir.path, "a", sample(1), false);
  write_fixture(dir.path, "b", sample(2), true);
  write_fixture(dir.path, "c", sample(3), false);
  const auto inputs = discover_inputs(dir.path);
  REQUIRE(inputs.size() == 3);
  CHECK(inputs[0].words.has_value());
  const auto m = run_pipeline(inputs);
  CHECK(m.accepted == 2);
  CHECK(m.rejected == 1);
  CHECK(m.reasons == std::map<std::string, int>{{"edit_distance", 1}});
  CHECK(m.tables[1].name == "b");
  CHECK_FALSE(m.tables[1].accepted());

  const fs::path out = dir.path / "out";
  write_pipeline_outputs(m, out);
  CHECK(fs::exists(out / "a.objects.json"));
  CHECK_FALSE(fs::exists(out / "b.objects.json"));
  CHECK(fs::exists(out / "b.report.json"));
  CHECK(read_file(out / "manifest.json") == manifest_to_json(m));
}

TEST_CASE("parallel runs match serial runs byte for byte") {
  TempDir dir("tabcanon_pipeline_parallel");
  std::mt19937_64 rng(51);
  for (int i = 0; i < 40; ++i) {
    const auto t = random_table(rng);
    const auto r = render_table(t);
    const std::string name = "t" + std::to_string(100 + i);
    write_file(dir.path / (name + ".html"), table_to_markup(t));
    save_tokens(r.chars, dir.path / (name + ".tokens.json"));
  }
  const auto inputs = discover_inputs(dir.path);
  PipelineOptions serial, parallel;
  parallel.jobs = 8;
  const auto a = manifest_to_json(run_pipeline(inputs, serial));
  const auto b = manifest_to_json(run_pipeline(inputs, parallel));
  CHECK(a == b);
  CHECK(a == manifest_to_json(run_pipeline(inputs, serial)));
}

TEST_CASE("empty directory gives an all-zero manifest") {
  TempDir dir("tabcanon_pipeline_empty");
  const auto m = run_pipeline(discover_inputs(dir.path));
  CHECK(m.accepted == 0);
  CHECK(m.rejected == 0);
  CHECK(manifest_to_json(m) == "{\n  \"accepted\": 0,\n  \"rejected\": 0,\n  \"reasons\": {},\n  \"tables\": []\n}\n");
}

TEST_CASE("I/O and schema failures propagate with the file name") {
  TempDir dir("tabcanon_pipeline_errors");
  CHECK_THROWS_AS(discover_inputs(dir.path / "missing"), IoError);
  write_file(dir.path / "x.table.json", "{}");
  CHECK_THROWS_AS(discover_inputs(dir.path), IoError);
  write_file(dir.path / "x.tokens.json", R"({"granularity": "char", "tokens": []})");
  try {
    run_pipeline(discover_inputs(dir.path));
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("x.table.json") != std::string::npos);
  }
}

TEST_CASE("malformed markup is a rejection") {
  TempDir dir("tabcanon_pipeline_markup");
  write_file(dir.path / "m.html", "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td></tr></table>");
  write_file(dir.path / "m.tokens.json", R"({"granularity": "char", "tokens": []})");
  write_file(dir.path / "n.html", "<table><tr><td>a</td>");
  write_file(dir.path / "n.tokens.json", R"({"granularity": "char", "tokens": []})");
  const auto m = run_pipeline(discover_inputs(dir.path));
  CHECK(m.reasons == std::map<std::string, int>{{"malformed_markup", 1}, {"ragged_grid", 1}});
}

TEST_CASE("score_pairs groups by complexity") {
  const auto simple = oracle::grid({{"a", "b"}, {"c", "d"}});
  const auto complex = oracle::table(2, 2, {{0, 0, 0, 1, "ab"}, {1, 1, 0, 0, "c"}, {1, 1, 1, 1, "d"}});
  const std::vector<ScorePair> pairs{{simple, simple}, {complex, simple}};
  const std::vector<Metric> metrics{Metric::Accuracy, Metric::GritsTop};
  const auto rows = score_pairs(pairs, metrics, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].category == "Simple");
  CHECK(rows[0].values.at(Metric::Accuracy) == 1.0);
  CHECK(rows[1].values.at(Metric::Accuracy) == 0.0);
  CHECK(rows[2].tables == 2);
  CHECK(rows[2].values.at(Metric::Accuracy) == 0.5);
  const auto csv = score_rows_to_csv(rows, metrics);
  CHECK(csv.rfind("category,tables,Acc_Cont,GriTS_Top\nSimple,1,1.0000,1.0000\n", 0) == 0);
  CHECK(parse_metric("grits-loc") == Metric::GritsLoc);
  CHECK_FALSE(parse_metric("ap50").has_value());
}

TEST_CASE("survey_directory") {
  TempDir dir("tabcanon_pipeline_survey");
  auto t = oracle::grid({{"h", "h"}, {"1", "2"}, {"1", "2"}, {"1", "2"}, {"G", ""}, {"1", "2"}}, 1);
  save_table(t, dir.path / "a.json");
  save_table(oracle::grid({{"a", "b"}}), dir.path / "b.json");
  save_tokens({}, dir.path / "a.tokens.json");
  const auto s = survey_directory(dir.path, 2);
  CHECK(s == SurveyCounts{1, 1, 1});
}
