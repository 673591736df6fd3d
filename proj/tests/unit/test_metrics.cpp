#include <doctest.h>

#include <random>

#include "support/oracles.hpp"
#include "tabcanon/metrics.hpp"
#include "tabcanon/spatial.hpp"
#include "tabcanon/synth.hpp"

using namespace tabcanon;
using oracle::C;

namespace {

constexpr GritsVariant kVariants[] = {GritsVariant::Topology, GritsVariant::Content, GritsVariant::Location};

TableAnnotation boxed(const TableAnnotation& t) {
  const auto r = render_table(t);
  try {
    return complete(r.table);
  } catch (const Error&) {
    return r.table;
  }
}

}  // namespace

TEST_CASE("grits of identical tables is 1") {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 100; ++n) {
    const auto t = boxed(random_table(rng));
    for (auto v : kVariants) CHECK(grits(t, t, v) == 1.0);
  }
}

TEST_CASE("grits against an empty table is 0") {
  const auto a = oracle::grid({{"a", "b"}, {"c", "d"}});
  TableAnnotation empty;
  for (auto v : kVariants) {
    CHECK(grits(a, empty, v) == 0.0);
    CHECK(grits(empty, empty, v) == 1.0);
  }
}

TEST_CASE("grits with an extra column equals brute force") {
  const auto a = oracle::grid({{"a", "b"}, {"c", "d"}});
  const auto b = oracle::grid({{"a", "b", "x"}, {"c", "d", "y"}});
  for (auto v : {GritsVariant::Topology, GritsVariant::Content}) {
    CHECK(grits(a, b, v) == doctest::Approx(oracle::grits(a, b, v)).epsilon(1e-12));
  }
  CHECK(grits(a, b, GritsVariant::Content) == doctest::Approx(8.0 / 10.0));
}

TEST_CASE("heuristic search equals brute force on shuffled middle column") {
  const auto a = oracle::grid({{"a", "b", "c"}, {"d", "e", "f"}, {"g", "h", "i"}});
  const auto b = oracle::grid({{"a", "h", "c"}, {"d", "b", "f"}, {"g", "e", "i"}});
  const SimilarityTable f(cell_matrix(a), cell_matrix(b), GritsVariant::Content);
  const double brute = oracle::grits_subsets(3, 3, 3, 3, [&](int i, int j, int k, int l) { return f(i, j, k, l); });
  CHECK(grits_search(f, SearchMode::Heuristic).total == doctest::Approx(brute).epsilon(1e-12));
  CHECK(grits_search(f, SearchMode::Exact).total == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("one-row matrices reduce to sequence alignment") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 7);
  for (int n = 0; n < 100; ++n) {
    const int ca = len(rng), cb = len(rng);
    std::vector<double> values(static_cast<std::size_t>(ca * cb));
    for (auto& v : values) v = u(rng);
    const SimilarityTable f(1, ca, 1, cb, values);
    const double brute = oracle::grits_subsets(1, ca, 1, cb, [&](int i, int j, int k, int l) { return f(i, j, k, l); });
    CHECK(grits_search(f, SearchMode::Heuristic).total == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("search results are order preserving and consistent") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const int ra = 1 + n % 4, ca = 1 + (n / 4) % 4, rb = 1 + (n / 16) % 4, cb = 1 + (n / 3) % 4;
    std::vector<double> values(static_cast<std::size_t>(ra * ca * rb * cb));
    for (auto& v : values) v = u(rng);
    const SimilarityTable f(ra, ca, rb, cb, values);
    for (auto mode : {SearchMode::Exact, SearchMode::Heuristic}) {
      const auto s = grits_search(f, mode);
      CHECK(substructure_total(f, s.rows, s.columns) == doctest::Approx(s.total).epsilon(1e-12));
      for (std::size_t k = 1; k < s.rows.size(); ++k) {
        CHECK(s.rows[k].first > s.rows[k - 1].first);
        CHECK(s.rows[k].second > s.rows[k - 1].second);
      }
    }
    const double brute = oracle::grits_subsets(ra, ca, rb, cb, [&](int i, int j, int k, int l) { return f(i, j, k, l); });
    CHECK(grits_search(f, SearchMode::Exact).total == doctest::Approx(brute).epsilon(1e-12));
    CHECK(grits_search(f, SearchMode::Heuristic).total <= brute + 1e-12);
  }
}

TEST_CASE("grits is symmetric and location is scale invariant") {
  std::mt19937_64 rng(34);
  RandomTableOptions o;
  o.max_rows = 4;
  o.max_cols = 4;
  o.min_rows = 1;
  o.min_cols = 1;
  for (int n = 0; n < 100; ++n) {
    const auto a = boxed(random_table(rng, o));
    const auto b = boxed(random_table(rng, o));
    for (auto v : kVariants) CHECK(grits(a, b, v) == doctest::Approx(grits(b, a, v)).epsilon(1e-12));
    auto move = [](TableAnnotation t) {
      for (auto& c : t.cells) {
        if (c.grid_box) c.grid_box = c.grid_box->scaled(2.5).translated(7, -3);
        if (c.text_box) c.text_box = c.text_box->scaled(2.5).translated(7, -3);
      }
      return t;
    };
    CHECK(grits(move(a), move(b), GritsVariant::Location) ==
          doctest::Approx(grits(a, b, GritsVariant::Location)).epsilon(1e-9));
  }
}

TEST_CASE("cell_matrix entries share their cell") {
  const auto t = oracle::table(2, 2, {{0, 1, 0, 0, "tall"}, {0, 0, 1, 1, "a"}, {1, 1, 1, 1, "b"}});
  const auto m = cell_matrix(t);
  CHECK(m.at(0, 0).cell == m.at(1, 0).cell);
  CHECK(m.at(0, 0).span == BBox{0, 0, 1, 2});
  CHECK(m.at(1, 0).span == BBox{0, -1, 1, 1});
  CHECK(m.at(1, 0).text == U"tall");
}

TEST_CASE("adjacency") {
  SUBCASE("identical tables") {
    const auto t = oracle::grid({{"a", "b"}, {"c", "d"}});
    CHECK(adjacency_fscore(t, t).f == 1.0);
  }
  SUBCASE("one missing relation") {
    const auto a = oracle::grid({{"a", "b", "c"}});
    const auto b = oracle::grid({{"a", "b", "x"}});
    const auto s = adjacency_fscore(a, b);
    CHECK(s.recall == doctest::Approx(0.5));
  }
  SUBCASE("blank cell is scanned across") {
    const auto t = oracle::grid({{"a", ""}, {"c", "d"}});
    const auto rel = adjacency_relations(t);
    std::multiset<oracle::Relation> got;
    for (const auto& r : rel) got.insert({r.from, r.to, r.direction == Direction::Right ? 0 : 1});
    CHECK(got == oracle::adjacency(t));
    CHECK(got == std::multiset<oracle::Relation>{{"a", "c", 1}, {"c", "d", 0}});
  }
  SUBCASE("random tables match the neighbour scan") {
    std::mt19937_64 rng(35);
    for (int n = 0; n < 200; ++n) {
      const auto t = random_table(rng);
      std::multiset<oracle::Relation> got;
      for (const auto& r : adjacency_relations(t)) got.insert({r.from, r.to, r.direction == Direction::Right ? 0 : 1});
      CHECK(got == oracle::adjacency(t));
    }
  }
}

TEST_CASE("content_accuracy") {
  const auto a = oracle::grid({{"a", "b"}});
  const auto b = oracle::grid({{"a", "B"}});
  std::vector<std::pair<TableAnnotation, TableAnnotation>> pairs{{a, a}, {a, a}, {a, a}, {a, a}};
  CHECK(content_accuracy(pairs) == 1.0);
  pairs[3].second = b;
  CHECK(content_accuracy(pairs) == 0.75);
  CHECK_FALSE(contents_match(a, oracle::grid({{"a"}, {"b"}})));
  CHECK(contents_match(a, oracle::grid({{" a ", "b"}})));
}
