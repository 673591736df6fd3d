#include <CLI11.hpp>

#include <iostream>

#include "tabcanon/synth.hpp"

namespace fs = std::filesystem;
using namespace tabcanon;

// Writes random tables with rendered page tokens, in the layout the
// pipeline command reads.
int main(int argc, char** argv) {
  CLI::App app{"Generate synthetic tables with page tokens"};
  std::string out_dir;
  int count = 10;
  std::uint64_t seed = 1;
  std::string format = "json";
  double noise = 0.0;
  RandomTableOptions opts;
  app.add_option("dir", out_dir, "Output directory")->required();
  app.add_option("-n,--count", count, "Number of tables")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--format", format, "Table file format")->check(CLI::IsMember({"json", "html"}));
  app.add_option("--noise", noise, "Hyphen/space noise rate in the character tokens")->check(CLI::Range(0.0, 1.0));
  app.add_option("--min-rows", opts.min_rows);
  app.add_option("--max-rows", opts.max_rows);
  app.add_option("--min-cols", opts.min_cols);
  app.add_option("--max-cols", opts.max_cols);
  app.add_option("--span-prob", opts.span_prob);
  app.add_option("--blank-prob", opts.blank_prob);
  app.add_option("--prh-prob", opts.prh_prob);
  CLI11_PARSE(app, argc, argv);

  try {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < count; ++i) {
      const TableAnnotation t = random_table(rng, opts);
      const Rendered r = render_table(t);
      char name[32];
      std::snprintf(name, sizeof name, "table_%04d", i);
      const fs::path base = fs::path(out_dir) / name;
      if (format == "html") {
        write_file(base.string() + ".html", table_to_markup(t));
      } else {
        save_table(t, base.string() + ".table.json");
      }
      save_tokens(noise > 0.0 ? add_noise(r.chars, noise, rng) : r.chars, base.string() + ".tokens.json");
      save_tokens(r.words, base.string() + ".words.json");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
