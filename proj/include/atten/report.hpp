#pragma once

// Tabular results, verdicts and their CSV form.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "atten/error.hpp"

namespace atten {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw invalid_parameter("row width does not match the table header");
    rows.push_back(std::move(row));
  }
};

struct Violation {
  std::string where;
  double magnitude = 0.0;
  std::string what;
};

/// Outcome of one verification run. passed() is exactly "no violations".
struct ExperimentReport {
  std::string name;
  std::vector<std::string> inputs;
  Table table;
  std::vector<Violation> violations;
  std::vector<std::string> notes;
  /// Hash of inputs plus tolerance set.
  std::string provenance;
  /// Named scalar results, in insertion order.
  std::vector<std::pair<std::string, double>> metrics;
  /// "", "precondition" or "numerical" when the run was cut short by an error.
  std::string error_kind;

  bool passed() const { return violations.empty(); }
  double metric(std::string_view key, double fallback = NAN) const {
    for (const auto& [k, v] : metrics)
      if (k == key) return v;
    return fallback;
  }
  void violate(std::string where, double magnitude, std::string what) {
    violations.push_back({std::move(where), magnitude, std::move(what)});
  }
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::uint64_t fnv1a64(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string provenance_hash(const std::vector<std::string>& parts) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& p : parts) {
    h = fnv1a64(p, h);
    h = fnv1a64("\x1f", h);
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline std::string csv_field(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

/// Header plus rows; doubles with 17 significant digits so they re-parse exactly.
inline std::string format_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + detail::csv_field(t.columns[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + detail::csv_field(row[i]);
    out += '\n';
  }
  return out;
}

/// Fields that parse completely as numbers become doubles; everything else stays text.
inline Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (header) {
      t.columns = std::move(fields);
      header = false;
      continue;
    }
    std::vector<Cell> row;
    for (auto& f : fields) {
      char* end = nullptr;
      errno = 0;
      const double v = f.empty() ? 0.0 : std::strtod(f.c_str(), &end);
      if (!f.empty() && end == f.c_str() + f.size())
        row.emplace_back(v);
      else
        row.emplace_back(std::move(f));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out << text;
  out.flush();
  if (!out) throw error("failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open '" + path + "' for reading: " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void emit_csv(const Table& t, const std::string& path) { write_text_file(path, format_csv(t)); }
inline void emit_csv(const ExperimentReport& r, const std::string& path) { emit_csv(r.table, path); }

}  // namespace atten
