#include "rswave/output.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "rswave/errors.hpp"
#include "rswave/version.hpp"

namespace rswave {

std::string Table::fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Table::fmt(std::uint64_t v) { return std::to_string(v); }
std::string Table::fmt(int v) { return std::to_string(v); }

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw std::invalid_argument("Table::add_row: cell count mismatch");
  rows.push_back(std::move(cells));
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

void emit_results(std::span<const Table> tables, const Manifest& manifest,
                  const std::filesystem::path& out_dir, bool force) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw NumericalError("emit_results: cannot create " + out_dir.string() +
                         ": " + ec.message());

  auto write_file = [&](const std::filesystem::path& path,
                        const std::string& content) {
    if (!force && std::filesystem::exists(path))
      throw NumericalError("emit_results: " + path.string() +
                           " exists (use --force to overwrite)");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("emit_results: cannot open " + path.string());
    out << content;
    if (!out) throw NumericalError("emit_results: write failed: " + path.string());
  };

  for (const auto& t : tables)
    write_file(out_dir / (t.name + ".csv"), t.to_csv());

  nlohmann::json j;
  j["schema"] = 1;
  j["command"] = manifest.command;
  j["config"] = serialize_config(manifest.config);
  j["config_hash"] = config_hash(manifest.config);
  j["seed"] = manifest.seed;
  j["workers"] = manifest.workers;
  j["versions"] = {{"rswave", kVersion}, {"git_revision", kGitRevision}};
  j["wall_seconds"] = manifest.wall_seconds;
  j["notes"] = manifest.notes;
  write_file(out_dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace rswave
