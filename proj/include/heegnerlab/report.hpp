#pragma once

// Tabular run reports rendered as TSV, CSV or JSON.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadforms.hpp"

namespace heegnerlab {

using json = nlohmann::ordered_json;

enum class OutputFormat { tsv, csv, json };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "tsv") return OutputFormat::tsv;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown format '" + s + "' (expected tsv, csv or json)");
}

/// Fixed number of significant digits, as printed by %.*g.
inline std::string format_sig(double x, int digits = 5) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;  // cells are numbers, strings or booleans

  Table& add(std::vector<json> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match table '" + name + "'");
    rows.push_back(std::move(row));
    return *this;
  }
};

struct Verdict {
  std::string id;
  bool pass = false;
  std::string detail;  // on failure: the inputs reproducing the counterexample
};

struct RunReport {
  std::string subcommand;
  json config = json::object();
  std::vector<Table> tables;
  std::vector<Verdict> verdicts;

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

namespace detail {

inline std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_sig(v.get<double>());
  return v.dump();
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_delimited(std::ostream& os, const std::vector<std::string>& cells, char sep) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << sep;
    os << (sep == ',' ? csv_escape(cells[i]) : cells[i]);
  }
  os << '\n';
}

inline json cell_json(const json& v) {
  if (v.is_number_float()) return std::stod(format_sig(v.get<double>(), 5));
  return v;
}

}  // namespace detail

inline Table verdict_table(const std::vector<Verdict>& verdicts) {
  Table t{"verdicts", {"check", "verdict", "detail"}, {}};
  for (const auto& v : verdicts) t.add({v.id, v.pass ? "PASS" : "FAIL", v.detail});
  return t;
}

/// TSV/CSV: each table as a header line plus rows, tables separated by a
/// blank line, verdicts last. JSON: one object with config echo.
inline std::string render(const RunReport& rep, OutputFormat fmt) {
  std::ostringstream os;
  if (fmt == OutputFormat::json) {
    json out = json::object();
    out["subcommand"] = rep.subcommand;
    out["config"] = rep.config;
    json tables = json::object();
    for (const auto& t : rep.tables) {
      json rows = json::array();
      for (const auto& r : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < r.size(); ++i) obj[t.columns[i]] = detail::cell_json(r[i]);
        rows.push_back(std::move(obj));
      }
      tables[t.name] = std::move(rows);
    }
    out["tables"] = std::move(tables);
    json verdicts = json::array();
    for (const auto& v : rep.verdicts) verdicts.push_back({{"check", v.id}, {"pass", v.pass}, {"detail", v.detail}});
    out["verdicts"] = std::move(verdicts);
    out["pass"] = rep.all_pass();
    os << out.dump(2) << '\n';
    return os.str();
  }
  const char sep = fmt == OutputFormat::csv ? ',' : '\t';
  std::vector<Table> all = rep.tables;
  if (!rep.verdicts.empty()) all.push_back(verdict_table(rep.verdicts));
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (k) os << '\n';
    detail::write_delimited(os, all[k].columns, sep);
    for (const auto& r : all[k].rows) {
      std::vector<std::string> cells;
      for (const auto& c : r) cells.push_back(detail::cell_text(c));
      detail::write_delimited(os, cells, sep);
    }
  }
  return os.str();
}

/// { "disc", "h", "elementary_divisors", "forms" } with forms in lexicographic order.
inline json class_group_json(const ClassGroup& g) {
  json forms = json::array();
  std::vector<BinaryQuadraticForm> sorted = g.elements();
  std::sort(sorted.begin(), sorted.end());
  for (const auto& f : sorted) forms.push_back({f.a(), f.b(), f.c()});
  json out = json::object();
  out["disc"] = g.disc().value();
  out["h"] = g.h();
  out["elementary_divisors"] = g.elementary_divisors();
  out["forms"] = std::move(forms);
  return out;
}

/// Wall-clock phase timer; reports go to stderr so stdout stays reproducible.
class PhaseTimer {
 public:
  explicit PhaseTimer(std::string phase, bool enabled = true)
      : phase_(std::move(phase)), enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  ~PhaseTimer() {
    if (enabled_) std::cerr << "[time] " << phase_ << ": " << format_sig(seconds(), 4) << " s\n";
  }
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::string phase_;
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace heegnerlab
