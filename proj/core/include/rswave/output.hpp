#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rswave/config.hpp"

namespace rswave {

/// In-memory CSV table with pre-formatted cells. Numeric formatting is
/// fixed ("%.17g") so identical runs emit identical bytes.
struct Table {
  std::string name;  // file stem, written as <name>.csv
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  static std::string fmt(double v);
  static std::string fmt(std::uint64_t v);
  static std::string fmt(int v);

  void add_row(std::vector<std::string> cells);
  std::string to_csv() const;
};

struct Manifest {
  std::string command;
  RunConfig config;
  std::uint64_t seed = 0;
  int workers = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> notes;
};

/// Writes every table as <out_dir>/<name>.csv plus <out_dir>/manifest.json.
/// Existing files are refused unless `force` is set; with `force` the
/// overwrite is idempotent. Throws NumericalError on IO failure.
void emit_results(std::span<const Table> tables, const Manifest& manifest,
                  const std::filesystem::path& out_dir, bool force);

}  // namespace rswave
