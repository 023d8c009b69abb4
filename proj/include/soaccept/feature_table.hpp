#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "soaccept/features.hpp"
#include "soaccept/matrix.hpp"
#include "soaccept/tfidf.hpp"

namespace soaccept::features {

// A labelled numeric table as read back from features.csv.
struct FeatureTable {
  std::vector<std::string> names;
  Matrix x;
  Labels y;

  // Index of a column, throwing DataError when absent.
  std::size_t column_index(std::string_view name) const;
  FeatureTable select_columns(const std::vector<std::string>& keep) const;
};

FeatureTable to_table(const FeatureMatrix& matrix);

// Header: the 16 feature names then "label". Values use 9 significant
// digits; label is 1 (accepted) or 0.
void write_features_csv(std::ostream& out, const FeatureTable& table);
void write_features_csv(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable read_features_csv(std::istream& in);
FeatureTable read_features_csv(const std::filesystem::path& path);

std::string format_number(double value);

// Splits one RFC-4180 record. Quoted fields may contain commas and doubled
// quotes; embedded newlines are not supported.
std::vector<std::string> split_csv_line(std::string_view line);
std::string quote_csv_field(std::string_view field);

// tfidf.json: {"v":1,"n_docs":N,"terms":[...],"df":[...]}.
void write_tfidf_json(const std::filesystem::path& path, const TfIdfModel& model);
TfIdfModel read_tfidf_json(const std::filesystem::path& path);

}  // namespace soaccept::features
