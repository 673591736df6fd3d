#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "tabcanon/ingest.hpp"

using namespace tabcanon;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = TABCANON_WORKDIR;

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + TABCANON_CLI + "\" " + args + " > \"" + (kWork / "stdout.txt").string() +
                          "\" 2> \"" + (kWork / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out() { return read_file(kWork / "stdout.txt"); }
std::string err() { return read_file(kWork / "stderr.txt"); }

struct Fixture {
  Fixture() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    const std::string synth = std::string("\"") + TABCANON_SYNTH + "\" \"" + (kWork / "in").string() +
                              "\" --count 6 --seed 4 --format html";
    REQUIRE(std::system(synth.c_str()) == 0);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "pipeline writes a deterministic manifest") {
  REQUIRE(run("pipeline \"" + (kWork / "in").string() + "\" -o \"" + (kWork / "out1").string() + "\"") == 0);
  const std::string first = out();
  CHECK(first.find("\"accepted\"") != std::string::npos);
  REQUIRE(run("pipeline \"" + (kWork / "in").string() + "\" -o \"" + (kWork / "out2").string() + "\" --jobs 4") == 0);
  CHECK(out() == first);
  CHECK(read_file(kWork / "out1" / "manifest.json") == read_file(kWork / "out2" / "manifest.json"));
  CHECK(run("--format csv pipeline \"" + (kWork / "in").string() + "\" -o \"" + (kWork / "out3").string() + "\"") == 0);
  CHECK(out().rfind("name,accepted,reasons\n", 0) == 0);
}

TEST_CASE_FIXTURE(Fixture, "single-table commands chain") {
  const std::string in = (kWork / "in" / "table_0000.html").string();
  const std::string tokens = (kWork / "in" / "table_0000.tokens.json").string();
  const std::string words = (kWork / "in" / "table_0000.words.json").string();
  const auto p = [](const std::string& n) { return "\"" + (kWork / n).string() + "\""; };
  REQUIRE(run("align \"" + in + "\" --tokens \"" + tokens + "\" -o " + p("aligned.json") + " --report " + p("align.json")) == 0);
  REQUIRE(run("complete " + p("aligned.json") + " -o " + p("completed.json")) == 0);
  REQUIRE(run("canonicalize " + p("completed.json") + " -o " + p("canon.json") + " --report " + p("canon_report.json")) == 0);
  CHECK(read_file(kWork / "canon_report.json").find("merges_performed") != std::string::npos);
  REQUIRE(run("complete " + p("canon.json") + " -o " + p("final.json")) == 0);
  REQUIRE(run("qc " + p("final.json") + " --tokens \"" + tokens + "\" --words \"" + words + "\"") == 0);
  CHECK(out().find("\"verdict\"") != std::string::npos);
  REQUIRE(run("dilate " + p("final.json") + " -o " + p("objects.json")) == 0);
  REQUIRE(run("assemble " + p("objects.json") + " --tokens \"" + words + "\" -o " + p("assembled.json") + " --report " +
              p("assemble_report.json")) == 0);
  const auto final_table = load_table(kWork / "final.json");
  const auto assembled = load_table(kWork / "assembled.json");
  CHECK(assembled.n_rows == final_table.n_rows);
  CHECK(assembled.n_cols == final_table.n_cols);
}

TEST_CASE_FIXTURE(Fixture, "survey and score") {
  const std::string in = "\"" + (kWork / "in").string() + "\"";
  REQUIRE(run("--format csv survey " + in) == 0);
  CHECK(out().rfind("investigated,with_prh,oversegmented,pct_of_prh,pct_of_investigated\n", 0) == 0);
  REQUIRE(run("--format csv score --gt " + in + " --pred " + in + " --metrics grits-top,accuracy") == 0);
  CHECK(out().rfind("category,tables,GriTS_Top,Acc_Cont\n", 0) == 0);
  CHECK(out().find("All,6,1.0000,1.0000") != std::string::npos);
  CHECK(run("score --gt " + in + " --pred " + in + " --metrics ap50") != 0);
}

TEST_CASE_FIXTURE(Fixture, "config file supplies option values") {
  write_file(kWork / "cfg.ini", "format = \"csv\"\n");
  REQUIRE(run("--config \"" + (kWork / "cfg.ini").string() + "\" survey \"" + (kWork / "in").string() + "\"") == 0);
  CHECK(out().rfind("investigated,", 0) == 0);
}

TEST_CASE_FIXTURE(Fixture, "errors exit non-zero and name the file") {
  CHECK(run("canonicalize \"" + (kWork / "nope.json").string() + "\"") == 1);
  CHECK(err().find("nope.json") != std::string::npos);
  write_file(kWork / "bad.json", "{\"n_rows\": 1}");
  CHECK(run("canonicalize \"" + (kWork / "bad.json").string() + "\"") == 1);
  CHECK(err().find("$.n_cols") != std::string::npos);
  CHECK(run("pipeline \"" + (kWork / "missing_dir").string() + "\" -o \"" + (kWork / "o").string() + "\"") == 1);
  CHECK(run("") != 0);
}
