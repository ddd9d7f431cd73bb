#include "mfsda/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "mfsda/error.hpp"

namespace mfsda::io {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// RFC-4180 style: quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_line(const std::string& line, const std::string& source, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      out.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorCode::IoError, source + ":" + std::to_string(line_no) + ": unterminated quoted field");
  }
  out.push_back(was_quoted ? cur : trim(cur));
  return out;
}

bool is_missing(const std::string& s) {
  return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" || s == "NAN" || s == "null" ||
         s == "NULL";
}

double parse_cell(const std::string& s, std::size_t row, const std::string& column) {
  const std::string where = "row " + std::to_string(row) + ", column '" + column + "'";
  if (is_missing(s)) throw Error(ErrorCode::MissingValue, "missing value at " + where);
  std::string_view v = s;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::NonNumeric, "non-numeric value '" + s + "' at " + where);
  }
  if (!std::isfinite(out)) throw Error(ErrorCode::NonNumeric, "non-finite value '" + s + "' at " + where);
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  return q + "\"";
}

}  // namespace

Dataset parse_dataset(std::istream& in, std::string_view response, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_line(line, source, line_no);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorCode::IoError, source + ": no header row");

  std::unordered_set<std::string> seen;
  for (const auto& h : header) {
    if (h.empty()) throw Error(ErrorCode::IoError, source + ": empty column name in header");
    if (!seen.insert(h).second) throw Error(ErrorCode::DuplicateHeader, source + ": duplicate column '" + h + "'");
  }

  std::size_t ycol = header.size();
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == response) ycol = c;
  if (ycol == header.size()) {
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(response.data(), response.data() + response.size(), k);
    if (ec == std::errc() && ptr == response.data() + response.size() && k >= 1 && k <= header.size()) {
      ycol = k - 1;
    } else {
      throw Error(ErrorCode::ColumnNotFound, source + ": response column '" + std::string(response) + "' not found");
    }
  }
  if (header.size() < 2) throw Error(ErrorCode::IoError, source + ": need a response and at least one covariate");

  Dataset d;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != ycol) d.names.push_back(header[c]);
  const std::size_t p = d.names.size();

  std::vector<double> values;  // row-major covariates
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_line(line, source, line_no);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::IoError, source + ":" + std::to_string(line_no) + ": expected " +
                                          std::to_string(header.size()) + " fields, found " +
                                          std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double v = parse_cell(fields[c], row, header[c]);
      if (c == ycol) d.y.push_back(v);
      else values.push_back(v);
    }
  }
  if (row == 0) throw Error(ErrorCode::IoError, source + ": no data rows");
  d.x = Matrix::from_row_major(row, p, values);
  return d;
}

Dataset read_dataset(const std::string& path, std::string_view response) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path + "'");
  return parse_dataset(in, response, path);
}

void write_dataset(std::ostream& out, const Dataset& d, std::string_view response_name) {
  d.validate();
  out << quote_if_needed(std::string(response_name));
  for (std::size_t j = 0; j < d.p(); ++j) out << ',' << quote_if_needed(d.feature_name(j));
  out << '\n';
  for (std::size_t i = 0; i < d.n(); ++i) {
    out << fmt17(d.y[i]);
    for (std::size_t j = 0; j < d.p(); ++j) out << ',' << fmt17(d.x(i, j));
    out << '\n';
  }
}

void write_dataset(const std::string& path, const Dataset& d, std::string_view response_name) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  write_dataset(out, d, response_name);
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

nlohmann::json to_json(const selector::SelectionResult& r, const Dataset& d, const transforms::TransformSpec& spec) {
  nlohmann::json j;
  j["threshold"] = std::isfinite(r.threshold) ? nlohmann::json(r.threshold) : nlohmann::json(nullptr);
  auto one_based = [](const std::vector<std::size_t>& v) {
    std::vector<std::size_t> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] + 1;
    return out;
  };
  j["selected_indices"] = one_based(r.selected);
  std::vector<std::string> names;
  for (std::size_t k : r.selected) names.push_back(d.feature_name(k));
  j["selected_names"] = names;
  j["w_statistics"] = r.stats.w;
  j["alpha"] = r.alpha;
  j["mode"] = std::string(selector::to_string(r.mode));
  j["rule"] = std::string(selector::to_string(r.rule));
  j["screened_set"] = one_based(r.stats.screened);
  j["transform"] = {{"family", std::string(transforms::to_string(spec.family))},
                    {"slices", spec.slices},
                    {"poly_degree", spec.poly_degree}};
  const auto& g = r.diagnostics;
  j["diagnostics"] = {{"n_total", g.n_total},     {"n_split1", g.n_first},       {"n_split2", g.n_second},
                      {"p", g.p},                 {"screened_size", g.screened}, {"lambdas", g.lambdas},
                      {"split_ms", g.split_ms},   {"fit_ms", g.fit_ms},          {"threshold_ms", g.threshold_ms},
                      {"total_ms", g.total_ms},   {"kernels", g.kernels}};
  return j;
}

void write_summary(std::ostream& out, const selector::SelectionResult& r, const Dataset& d) {
  out << "mode " << selector::to_string(r.mode) << ", rule " << selector::to_string(r.rule) << ", alpha "
      << r.alpha << '\n';
  out << "threshold " << (std::isfinite(r.threshold) ? fmt17(r.threshold) : std::string("inf")) << '\n';
  out << "selected " << r.selected.size() << " of " << d.p() << " features\n";
  for (std::size_t k : r.selected) {
    out << "  " << (k + 1) << '\t' << d.feature_name(k) << "\tW=" << fmt17(r.stats.w[k]) << '\n';
  }
}

}  // namespace mfsda::io
