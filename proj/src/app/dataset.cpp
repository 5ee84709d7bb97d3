#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "otto/app.hpp"

namespace otto::app {
namespace {

bool is_empty(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return true;
  if (const double* d = std::get_if<double>(&c)) return !std::isfinite(*d);
  return false;
}

std::string csv_cell(const Cell& c) {
  if (is_empty(c)) return {};
  if (const double* d = std::get_if<double>(&c)) return format_number(*d);
  if (const bool* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  if (is_empty(c)) return nullptr;
  if (const double* d = std::get_if<double>(&c)) return *d;
  if (const bool* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string render_csv(const Dataset& ds) {
  std::string out = "# " + ds.metadata.dump() + "\n";
  for (std::size_t i = 0; i < ds.columns.size(); ++i) {
    if (i) out += ',';
    out += ds.columns[i];
  }
  out += '\n';
  for (const auto& row : ds.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Dataset& ds) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::parse(ds.metadata.dump());
  doc["columns"] = ds.columns;
  auto& records = doc["records"] = nlohmann::ordered_json::array();
  for (const auto& row : ds.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) rec[ds.columns[i]] = json_cell(row[i]);
    records.push_back(std::move(rec));
  }
  return doc.dump(1) + "\n";
}

std::string render(const Dataset& ds, Format format) {
  return format == Format::Json ? render_json(ds) : render_csv(ds);
}

void write_atomically(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (out) out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("", "cannot write output file '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("", "cannot move output into place at '" + path + "'");
  }
}

}  // namespace otto::app
