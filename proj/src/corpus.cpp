#include "maxrep/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "maxrep/errors.hpp"
#include "maxrep/random.hpp"
#include "maxrep/strstat.hpp"

namespace maxrep {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string encode_utf8(std::uint32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

std::vector<std::uint32_t> decode_utf8(const std::string& data) {
  std::vector<std::uint32_t> out;
  out.reserve(data.size());
  std::size_t i = 0;
  auto fail = [&](std::size_t at) {
    throw InputError("invalid UTF-8 at byte offset " + std::to_string(at));
  };
  while (i < data.size()) {
    const auto b0 = static_cast<unsigned char>(data[i]);
    std::size_t len;
    std::uint32_t cp;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      fail(i);
    }
    if (i + len > data.size()) fail(i);
    for (std::size_t j = 1; j < len; ++j) {
      const auto b = static_cast<unsigned char>(data[i + j]);
      if ((b & 0xC0) != 0x80) fail(i + j);
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail(i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

}  // namespace

std::string to_string(AlphabetMode mode) {
  switch (mode) {
    case AlphabetMode::bytes: return "bytes";
    case AlphabetMode::unicode_codepoints: return "unicode_codepoints";
    case AlphabetMode::mapped_tokens: return "mapped_tokens";
  }
  return "?";
}

AlphabetMode alphabet_mode_from_string(const std::string& name) {
  for (auto m : {AlphabetMode::bytes, AlphabetMode::unicode_codepoints, AlphabetMode::mapped_tokens}) {
    if (to_string(m) == name) return m;
  }
  throw InputError("unknown alphabet mode '" + name + "'");
}

IngestResult ingest_bytes(const std::string& data, AlphabetMode mode,
                          const std::vector<std::string>& mapping) {
  switch (mode) {
    case AlphabetMode::bytes: {
      std::vector<Symbol> s(data.begin(), data.end());
      for (auto& v : s) v &= 0xFF;
      return {Sequence(std::move(s), 256), {}};
    }
    case AlphabetMode::unicode_codepoints: {
      const auto cps = decode_utf8(data);
      std::vector<std::uint32_t> distinct(cps);
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      std::vector<Symbol> s(cps.size());
      for (std::size_t i = 0; i < cps.size(); ++i) {
        s[i] = static_cast<Symbol>(std::lower_bound(distinct.begin(), distinct.end(), cps[i]) -
                                   distinct.begin());
      }
      IngestResult r{Sequence(std::move(s), static_cast<Symbol>(std::max<std::size_t>(1, distinct.size()))), {}};
      for (auto cp : distinct) r.symbol_table.push_back(encode_utf8(cp));
      return r;
    }
    case AlphabetMode::mapped_tokens: {
      if (mapping.empty()) throw InputError("mapped_tokens mode requires a mapping table");
      std::unordered_map<std::string, Symbol> index;
      for (std::size_t i = 0; i < mapping.size(); ++i) {
        if (!index.emplace(mapping[i], static_cast<Symbol>(i)).second) {
          throw InputError("duplicate token '" + mapping[i] + "' in mapping table");
        }
      }
      std::istringstream in(data);
      std::vector<Symbol> s;
      std::string token;
      while (in >> token) {
        auto it = index.find(token);
        if (it == index.end()) throw InputError("token '" + token + "' is not in the mapping table");
        s.push_back(it->second);
      }
      return {Sequence(std::move(s), static_cast<Symbol>(mapping.size())), mapping};
    }
  }
  throw InputError("unknown alphabet mode");
}

IngestResult ingest_text(const std::filesystem::path& path, AlphabetMode mode,
                         const std::optional<std::filesystem::path>& mapping_path) {
  std::vector<std::string> mapping;
  if (mode == AlphabetMode::mapped_tokens) {
    if (!mapping_path) throw InputError("mapped_tokens mode requires a mapping table");
    std::istringstream lines(read_file(*mapping_path));
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) mapping.push_back(line);
    }
  }
  return ingest_bytes(read_file(path), mode, mapping);
}

std::vector<std::size_t> geometric_grid(std::size_t min_n, std::size_t max_n, double ratio) {
  if (min_n == 0) throw InputError("grid minimum must be positive");
  if (!(ratio > 1.0)) throw InputError("grid ratio must exceed 1");
  std::vector<std::size_t> grid;
  for (int j = 0;; ++j) {
    const double v = static_cast<double>(min_n) * std::pow(ratio, j);
    if (v > static_cast<double>(max_n) + 0.5) break;
    const auto n = static_cast<std::size_t>(std::llround(v));
    if (n > max_n) break;
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  return grid;
}

OffsetSamplePlan make_offset_plan(std::size_t source_length, std::vector<std::size_t> grid,
                                  std::uint64_t seed, std::size_t replicates) {
  if (replicates == 0) throw InputError("replicates must be positive");
  OffsetSamplePlan plan;
  plan.source_length = source_length;
  plan.seed = seed;
  plan.replicates = replicates;
  Rng rng(seed);
  for (std::size_t n : grid) {
    if (n > source_length) {
      throw InputError("grid length " + std::to_string(n) + " exceeds source length " +
                       std::to_string(source_length));
    }
    std::vector<std::size_t> offs(replicates);
    for (auto& c : offs) c = uniform_below(rng, source_length - n + 1);
    plan.offsets.push_back(std::move(offs));
  }
  plan.grid = std::move(grid);
  return plan;
}

std::vector<ExperimentRow> repetition_experiment(const Sequence& x, const OffsetSamplePlan& plan,
                                                 unsigned workers) {
  if (plan.offsets.size() != plan.grid.size()) throw InputError("plan offsets do not match its grid");
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t g = 0; g < plan.grid.size(); ++g) {
    const std::size_t n = plan.grid[g];
    if (n > x.size()) {
      throw InputError("grid length " + std::to_string(n) + " exceeds source length " +
                       std::to_string(x.size()));
    }
    for (std::size_t c : plan.offsets[g]) {
      if (c > x.size() - n) throw InputError("offset outside the source");
      jobs.emplace_back(n, c);
    }
  }
  auto symbols = x.symbols();
  return run_replicas<ExperimentRow>(jobs.size(), 0, workers, [&](std::size_t i, Rng&) {
    const auto [n, c] = jobs[i];
    return ExperimentRow{n, c, maximal_repetition(symbols.subspan(c, n))};
  });
}

std::vector<std::pair<double, double>> average_replicates(const std::vector<ExperimentRow>& rows) {
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < rows.size() && rows[j].n == rows[i].n) sum += static_cast<double>(rows[j++].repetition);
    out.emplace_back(static_cast<double>(rows[i].n), sum / static_cast<double>(j - i));
    i = j;
  }
  return out;
}

PowerLawFit fit_power_law_log(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> xs, ys;
  PowerLawFit fit;
  for (const auto& [n, L] : points) {
    if (!(n >= 3.0) || !(L > 0.0)) {
      ++fit.points_excluded;
      continue;
    }
    xs.push_back(std::log(std::log(n)));
    ys.push_back(std::log(L));
    fit.n_min = xs.size() == 1 ? n : std::min(fit.n_min, n);
    fit.n_max = std::max(fit.n_max, n);
  }
  fit.points_used = xs.size();
  if (xs.size() < 2) throw InputError("fewer than 2 usable points");
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("fewer than 2 usable points (all at the same n)");
  fit.alpha = sxy / sxx;
  const double intercept = my - fit.alpha * mx;
  fit.A = std::exp(intercept);
  fit.A_base10 = fit.A * std::pow(std::log(10.0), fit.alpha);
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.alpha * xs[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / m);
  return fit;
}

Sequence permutation_baseline(const Sequence& x, std::uint64_t seed) {
  std::vector<Symbol> s(x.symbols().begin(), x.symbols().end());
  Rng rng(seed);
  for (std::size_t i = s.size(); i > 1; --i) {
    std::swap(s[i - 1], s[uniform_below(rng, i)]);
  }
  return Sequence(std::move(s), x.alphabet_size());
}

}  // namespace maxrep
