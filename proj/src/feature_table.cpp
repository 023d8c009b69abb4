#include "soaccept/feature_table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>

#include "soaccept/error.hpp"

namespace soaccept::features {

using nlohmann::json;

std::size_t FeatureTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw DataError("feature table has no column '" + std::string(name) + "'");
}

FeatureTable FeatureTable::select_columns(const std::vector<std::string>& keep) const {
  std::vector<std::size_t> idx;
  idx.reserve(keep.size());
  for (const auto& name : keep) idx.push_back(column_index(name));
  return FeatureTable{keep, x.select_cols(idx), y};
}

FeatureTable to_table(const FeatureMatrix& matrix) {
  FeatureTable table;
  table.names.assign(kFeatureNames.begin(), kFeatureNames.end());
  table.x = matrix.to_matrix();
  table.y = matrix.labels();
  return table;
}

std::string format_number(double value) {
  if (!std::isfinite(value)) throw DataError("cannot write non-finite value");
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string quote_csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string current;
  std::size_t i = 0;
  bool quoted = false;
  bool was_quoted = false;
  while (i < line.size()) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      if (!current.empty() || was_quoted) throw DataError("csv: stray quote in field");
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw DataError("csv: text after closing quote");
      current += c;
    }
    ++i;
  }
  if (quoted) throw DataError("csv: unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

void write_features_csv(std::ostream& out, const FeatureTable& table) {
  for (const auto& name : table.names) out << quote_csv_field(name) << ',';
  out << "label\n";
  for (std::size_t r = 0; r < table.x.rows(); ++r) {
    for (std::size_t c = 0; c < table.x.cols(); ++c) out << format_number(table.x(r, c)) << ',';
    out << (table.y[r] == 1 ? '1' : '0') << '\n';
  }
}

void write_features_csv(const std::filesystem::path& path, const FeatureTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_features_csv(out, table);
  if (!out) throw DataError("write failed: " + path.string());
}

FeatureTable read_features_csv(std::istream& in) {
  FeatureTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError("features.csv: missing header");
  auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "label") throw DataError("features.csv: last column must be 'label'");
  header.pop_back();
  table.names = header;
  const std::size_t cols = header.size();
  std::vector<double> row(cols);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    const auto where = "features.csv line " + std::to_string(line_no);
    if (fields.size() != cols + 1) throw DataError(where + ": expected " + std::to_string(cols + 1) + " fields");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& f = fields[c];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[c]);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(row[c]))
        throw DataError(where + ": bad number '" + f + "'");
    }
    const auto& label = fields[cols];
    if (label != "0" && label != "1") throw DataError(where + ": label must be 0 or 1");
    table.x.append_row(row);
    table.y.push_back(label == "1" ? 1 : 0);
  }
  if (table.x.rows() == 0) table.x = Matrix(0, cols);
  return table;
}

FeatureTable read_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return read_features_csv(in);
}

void write_tfidf_json(const std::filesystem::path& path, const TfIdfModel& model) {
  json j;
  j["v"] = 1;
  j["n_docs"] = model.n_docs();
  j["terms"] = model.terms();
  j["df"] = model.document_frequencies();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

TfIdfModel read_tfidf_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    const auto j = json::parse(in);
    if (j.at("v").get<int>() != 1) throw DataError("tfidf.json: unsupported schema version");
    return TfIdfModel(j.at("terms").get<std::vector<std::string>>(), j.at("df").get<std::vector<std::uint32_t>>(),
                      j.at("n_docs").get<std::size_t>());
  } catch (const json::exception& e) {
    throw DataError(std::string("tfidf.json: ") + e.what());
  }
}

}  // namespace soaccept::features
