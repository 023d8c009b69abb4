#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "soaccept/dump.hpp"

namespace soaccept::ingest {

inline constexpr int kDatasetSchemaVersion = 1;

class SchemaVersionError : public DataError {
 public:
  using DataError::DataError;
};

// dataset.jsonl: one JSON object per line, {"answers": [...], "question": {...}, "v": 1}.
void write_dataset(std::ostream& out, const std::vector<QARecord>& records);
std::vector<QARecord> read_dataset(std::istream& in);

void write_dataset(const std::filesystem::path& path, const std::vector<QARecord>& records);
std::vector<QARecord> read_dataset(const std::filesystem::path& path);

}  // namespace soaccept::ingest
