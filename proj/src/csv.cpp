#include "scm/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "scm/error.hpp"

namespace scm {

namespace {

// Splits one CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line,
                                        const std::string& where) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw DataError(where + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += '"';
  return out;
}

double parse_value(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw DataError(where + ": bad value '" + text + "'");
  return value;
}

std::string format_value(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::map<std::string, RawSeries> read_price_csv(std::istream& in,
                                                const std::string& source_name) {
  std::map<std::string, RawSeries> out;
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line))
    throw DataError(source_name + ": empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "series_id,label,month,value")
    throw DataError(source_name + ":1: expected header "
                    "'series_id,label,month,value', got '" + line + "'");

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    const std::vector<std::string> fields = split_csv_line(line, where);
    if (fields.size() != 4)
      throw DataError(where + ": expected 4 fields, got " +
                      std::to_string(fields.size()));

    const std::string& id = fields[0];
    if (id.empty()) throw DataError(where + ": empty series_id");
    MonthKey month;
    try {
      month = MonthKey::parse(fields[2]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    const double value = parse_value(fields[3], where);
    if (!std::isfinite(value) || value <= 0.0)
      throw DataError(where + ": non-positive value for series '" + id +
                      "' at " + month.str());

    RawSeries& series = out[id];
    if (series.label.empty()) series.label = fields[1];
    if (!series.obs.emplace(month, value).second)
      throw DataError(where + ": duplicate row for series '" + id + "' at " +
                      month.str());
  }
  return out;
}

std::map<std::string, RawSeries> read_price_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file '" + path + "'");
  return read_price_csv(in, path);
}

void write_price_csv(std::ostream& out,
                     const std::vector<const PriceSeries*>& series) {
  out << "series_id,label,month,value\n";
  for (const PriceSeries* s : series) {
    for (int i = 0; i < s->size(); ++i) {
      out << csv_escape(s->id()) << ',' << csv_escape(s->label()) << ','
          << advance(s->start(), i).str() << ','
          << format_value(s->values()[static_cast<std::size_t>(i)]) << '\n';
    }
  }
}

void write_panel_csv(std::ostream& out, const Panel& panel) {
  std::vector<const PriceSeries*> series;
  series.push_back(&panel.treated);
  for (const auto& d : panel.donors) series.push_back(&d);
  write_price_csv(out, series);
}

void write_panel_csv_file(const std::string& path, const Panel& panel) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write data file '" + path + "'");
  write_panel_csv(out, panel);
  out.flush();
  if (!out) throw IoError("failed writing data file '" + path + "'");
}

namespace {

PriceSeries build_series(const std::map<std::string, RawSeries>& raw,
                         const std::string& id, const StudyDesign& design) {
  auto it = raw.find(id);
  if (it == raw.end())
    throw DataError("requested series '" + id + "' not found in data");

  std::map<MonthKey, double> window;
  std::string missing;
  for (MonthKey m = design.pre_start; m <= design.eval_end; m = successor(m)) {
    auto obs = it->second.obs.find(m);
    if (obs == it->second.obs.end()) {
      if (!missing.empty()) missing += ", ";
      missing += m.str();
    } else {
      window.emplace(m, obs->second);
    }
  }
  if (!missing.empty())
    throw DataError("series '" + id + "': gap in coverage, missing " + missing);
  return PriceSeries::from_map(id, it->second.label, window);
}

}  // namespace

Panel assemble_panel(const std::map<std::string, RawSeries>& raw,
                     const std::string& treated_id,
                     const std::vector<std::string>& donor_ids,
                     const StudyDesign& design) {
  Panel panel{build_series(raw, treated_id, design), {}, design};
  panel.donors.reserve(donor_ids.size());
  for (const auto& id : donor_ids)
    panel.donors.push_back(build_series(raw, id, design));

  ValidationReport report = validate_panel(panel);
  if (!report.ok())
    throw DataError("panel invalid after assembly:\n" + report.str());
  return panel;
}

PriceSeries extract_series(const std::map<std::string, RawSeries>& raw,
                           const std::string& id, const StudyDesign& design) {
  return build_series(raw, id, design);
}

}  // namespace scm
