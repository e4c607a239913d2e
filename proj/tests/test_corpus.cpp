#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include "maxrep/corpus.hpp"
#include "maxrep/errors.hpp"
#include "maxrep/strstat.hpp"

using namespace maxrep;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / ("maxrep_corpus_" + name);
  std::ofstream(p, std::ios::binary) << body;
  return p;
}

}  // namespace

TEST_CASE("ingesting bytes") {
  auto r = ingest_text(write_temp("const", std::string(50, 'z')), AlphabetMode::bytes);
  CHECK(r.sequence.alphabet_size() == 256);
  CHECK(r.sequence.size() == 50);
  for (Symbol s : r.sequence.symbols()) CHECK(s == 'z');

  r = ingest_text(write_temp("abab", "abab"), AlphabetMode::bytes);
  CHECK(maximal_repetition(r.sequence) == 2);
  CHECK(ingest_text(write_temp("empty", ""), AlphabetMode::bytes).sequence.empty());
  CHECK_THROWS_AS(ingest_text("/nonexistent/file", AlphabetMode::bytes), InputError);
}

TEST_CASE("ingesting unicode codepoints") {
  const auto r = ingest_bytes("h\xC3\xA9llo \xE2\x82\xAC", AlphabetMode::unicode_codepoints);
  CHECK(r.sequence.size() == 7);
  CHECK(r.sequence.alphabet_size() == 6);  // space h l o é €
  CHECK(r.symbol_table.front() == " ");
  CHECK(r.symbol_table.back() == "\xE2\x82\xAC");
  CHECK(r.sequence[2] == r.sequence[3]);

  try {
    ingest_bytes("ab\xC3(", AlphabetMode::unicode_codepoints);
    FAIL("expected a decode error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("byte offset 3") != std::string::npos);
  }
  CHECK_THROWS_AS(ingest_bytes("\xC0\x80", AlphabetMode::unicode_codepoints), InputError);  // overlong
}

TEST_CASE("ingesting mapped tokens") {
  const std::vector<std::string> table{"the", "cat", "sat"};
  const auto r = ingest_bytes("the cat\nsat  the cat", AlphabetMode::mapped_tokens, table);
  CHECK(r.sequence.alphabet_size() == 3);
  CHECK(std::vector<Symbol>(r.sequence.symbols().begin(), r.sequence.symbols().end()) ==
        std::vector<Symbol>{0, 1, 2, 0, 1});
  CHECK_THROWS_AS(ingest_bytes("the dog", AlphabetMode::mapped_tokens, table), InputError);
  CHECK_THROWS_AS(ingest_bytes("the", AlphabetMode::mapped_tokens, {}), InputError);
  const auto mapping = write_temp("map", "the\ncat\nsat\n");
  const auto text = write_temp("tokens", "sat sat cat");
  CHECK(ingest_text(text, AlphabetMode::mapped_tokens, mapping).sequence.size() == 3);
  CHECK_THROWS_AS(ingest_text(text, AlphabetMode::mapped_tokens), InputError);
}

TEST_CASE("geometric grids and offset plans") {
  const auto g = geometric_grid(16, 1000, std::pow(2.0, 0.25));
  CHECK(g.front() == 16);
  CHECK(g.back() <= 1000);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(geometric_grid(10, 5, 2.0).empty());
  CHECK_THROWS_AS(geometric_grid(16, 100, 1.0), InputError);

  const auto plan = make_offset_plan(5000, g, 9, 3);
  REQUIRE(plan.offsets.size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(plan.offsets[i].size() == 3);
    for (auto c : plan.offsets[i]) CHECK(c <= 5000 - g[i]);
  }
  CHECK(make_offset_plan(5000, g, 9, 3).offsets == plan.offsets);
  CHECK_THROWS_AS(make_offset_plan(100, {200}, 1), InputError);
}

TEST_CASE("repetition experiment") {
  const Sequence constant(std::vector<Symbol>(4000, 7), 256);
  const auto plan = make_offset_plan(constant.size(), geometric_grid(16, 2000, 2.0), 4);
  for (const auto& row : repetition_experiment(constant, plan)) CHECK(row.repetition == row.n - 1);

  OffsetSamplePlan fixed;
  fixed.source_length = 8;
  fixed.grid = {4};
  fixed.offsets = {{0}};
  const Sequence abab({0, 1, 0, 1, 0, 1, 0, 1}, 2);
  CHECK(repetition_experiment(abab, fixed) == std::vector<ExperimentRow>{{4, 0, 2}});

  std::mt19937_64 rng(8);
  std::vector<Symbol> text(20'000);
  for (auto& s : text) s = static_cast<Symbol>(rng() % 4);
  const Sequence x(text, 4);
  const auto p = make_offset_plan(x.size(), geometric_grid(16, 10'000, 1.5), 21);
  CHECK(repetition_experiment(x, p) == repetition_experiment(x, p, 4));

  // Offset-0 plan: prefixes, so L is nondecreasing.
  OffsetSamplePlan prefixes;
  prefixes.source_length = x.size();
  prefixes.grid = geometric_grid(16, 10'000, 1.5);
  prefixes.offsets.assign(prefixes.grid.size(), {0});
  const auto rows = repetition_experiment(x, prefixes);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].repetition <= rows[i].repetition);

  fixed.grid = {9};
  CHECK_THROWS_AS(repetition_experiment(abab, fixed), InputError);
}

TEST_CASE("power-law-logarithmic fit recovers exact curves") {
  for (double A : {0.1, 1.0, 10.0}) {
    for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
      std::vector<std::pair<double, double>> pts;
      for (double n = 10; n <= 1e6; n *= 10) pts.emplace_back(n, A * std::pow(std::log(n), alpha));
      const auto f = fit_power_law_log(pts);
      CHECK(std::abs(f.A - A) / A <= 1e-6);
      CHECK(std::abs(f.alpha - alpha) / alpha <= 1e-6);
      CHECK(f.residual_rms <= 1e-9);
      CHECK(f.points_used == 6);
      CHECK(f.A_base10 == doctest::Approx(A * std::pow(std::log(10.0), alpha)));
    }
  }
  std::vector<std::pair<double, double>> two{{1.0, 5.0}, {2.0, 1.0}, {100.0, 0.0}, {50.0, 4.0}};
  CHECK_THROWS_WITH_AS(fit_power_law_log(two), "fewer than 2 usable points", InputError);
  two.emplace_back(500.0, 6.0);
  const auto f = fit_power_law_log(two);
  CHECK(f.points_used == 2);
  CHECK(f.points_excluded == 3);
}

TEST_CASE("fit tolerates multiplicative noise") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<double, double>> pts;
    for (auto n : geometric_grid(16, 1'000'000, std::pow(2.0, 0.25))) {
      const double L = 0.5 * std::pow(std::log(static_cast<double>(n)), 3.0);
      pts.emplace_back(static_cast<double>(n), L * (1.0 + noise(rng)));
    }
    const auto f = fit_power_law_log(pts);
    CHECK(f.alpha >= 2.8);
    CHECK(f.alpha <= 3.2);
  }
}

TEST_CASE("permutation baseline") {
  std::mt19937_64 rng(1);
  std::vector<Symbol> v(1000);
  for (auto& s : v) s = static_cast<Symbol>(rng() % 5);
  const Sequence x(v, 5);
  const auto p = permutation_baseline(x, 3);
  std::vector<Symbol> a(v), b(p.symbols().begin(), p.symbols().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  CHECK(permutation_baseline(x, 3) == p);
  CHECK_FALSE(permutation_baseline(x, 4) == p);
  const Sequence aaaa({0, 0, 0, 0}, 1);
  CHECK(permutation_baseline(aaaa, 9) == aaaa);

  // Every arrangement of 3 distinct symbols appears with roughly equal weight.
  std::map<std::vector<Symbol>, int> counts;
  const Sequence abc({0, 1, 2}, 3);
  for (std::uint64_t seed = 0; seed < 6000; ++seed) {
    const auto s = permutation_baseline(abc, seed);
    counts[std::vector<Symbol>(s.symbols().begin(), s.symbols().end())]++;
  }
  CHECK(counts.size() == 6);
  for (const auto& [perm, c] : counts) CHECK(std::abs(c - 1000) < 150);
}
