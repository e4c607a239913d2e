#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "maxrep/sequence.hpp"

namespace maxrep {

enum class AlphabetMode { bytes, unicode_codepoints, mapped_tokens };
std::string to_string(AlphabetMode mode);
AlphabetMode alphabet_mode_from_string(const std::string& name);

struct IngestResult {
  Sequence sequence;
  // symbol_table[s] is the printable source of symbol s: a byte value, a
  // UTF-8 encoded codepoint, or a token. Empty for bytes mode.
  std::vector<std::string> symbol_table;
};

// bytes: one symbol per byte, alphabet 256.
// unicode_codepoints: UTF-8 decoded; symbols number the distinct codepoints
//   in increasing codepoint order. Malformed input is an InputError naming
//   the byte offset.
// mapped_tokens: whitespace-separated tokens, numbered by their line in
//   `mapping_path` (one token per line). Unknown tokens are an InputError.
IngestResult ingest_text(const std::filesystem::path& path, AlphabetMode mode,
                         const std::optional<std::filesystem::path>& mapping_path = std::nullopt);
IngestResult ingest_bytes(const std::string& data, AlphabetMode mode,
                          const std::vector<std::string>& mapping = {});

// Distinct rounded values of min_n * ratio^j up to max_n.
std::vector<std::size_t> geometric_grid(std::size_t min_n, std::size_t max_n, double ratio);

struct OffsetSamplePlan {
  std::size_t source_length = 0;
  std::vector<std::size_t> grid;
  // offsets[g][r]: start of replicate r at grid point g, uniform on [0, N - n].
  std::vector<std::vector<std::size_t>> offsets;
  std::uint64_t seed = 0;
  std::size_t replicates = 1;
};

// Offsets are drawn from one generator seeded with `seed`, in grid order.
OffsetSamplePlan make_offset_plan(std::size_t source_length, std::vector<std::size_t> grid,
                                  std::uint64_t seed, std::size_t replicates = 1);

struct ExperimentRow {
  std::size_t n = 0;
  std::size_t offset = 0;
  std::size_t repetition = 0;
  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

// One row per (grid point, replicate), ordered as in the plan.
std::vector<ExperimentRow> repetition_experiment(const Sequence& x, const OffsetSamplePlan& plan,
                                                 unsigned workers = 1);

// (n, mean L over replicates) per grid point.
std::vector<std::pair<double, double>> average_replicates(const std::vector<ExperimentRow>& rows);

struct PowerLawFit {
  double A = 0.0;        // L = A (ln n)^alpha
  double alpha = 0.0;
  double A_base10 = 0.0; // L = A_base10 (log10 n)^alpha
  double residual_rms = 0.0;
  std::size_t points_used = 0;
  std::size_t points_excluded = 0;
  double n_min = 0.0;
  double n_max = 0.0;
};

// Least squares of ln L on ln ln n. Points with n < 3 or L <= 0 are excluded
// and counted; fewer than 2 usable points is an InputError.
PowerLawFit fit_power_law_log(const std::vector<std::pair<double, double>>& points);

// Unbiased Fisher-Yates shuffle, deterministic in seed.
Sequence permutation_baseline(const Sequence& x, std::uint64_t seed);

}  // namespace maxrep
