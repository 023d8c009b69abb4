#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "soaccept/error.hpp"

namespace soaccept::ingest {

using AttributeMap = std::map<std::string, std::string, std::less<>>;

// Malformed XML. offset() is the byte position where the problem was found;
// last_row_end() is the byte position just past the last complete row
// element, i.e. everything before it was delivered successfully.
class XmlError : public DataError {
 public:
  XmlError(const std::string& message, std::uint64_t offset, std::uint64_t last_row_end);

  std::uint64_t offset() const noexcept { return offset_; }
  std::uint64_t last_row_end() const noexcept { return last_row_end_; }

 private:
  std::uint64_t offset_;
  std::uint64_t last_row_end_;
};

// Streaming reader for Stack Exchange dump files: a single root element whose
// payload children are <row .../> elements carrying attributes. Other
// elements, comments and processing instructions are skipped. Memory use is
// one read chunk plus the current row.
class RowReader {
 public:
  explicit RowReader(std::istream& in, std::size_t chunk_size = 64 * 1024);

  // Fills `row` with the next row's attributes (entity-decoded) and returns
  // true, or returns false once the document has been fully consumed.
  // Throws XmlError on malformed input.
  bool next(AttributeMap& row);

  std::uint64_t rows_read() const noexcept { return rows_read_; }

 private:
  enum class Phase { kProlog, kBody, kEpilog, kDone };

  int peek(std::size_t ahead = 0);
  int get();
  bool starts_with(std::string_view s);
  void expect(std::string_view s);
  void skip_until(std::string_view terminator, const char* what);
  void skip_whitespace();
  std::string read_name();
  void read_attributes(AttributeMap& attrs, bool& self_closing);
  void append_reference(std::string& out);
  void skip_text();
  void skip_doctype();
  [[noreturn]] void fail(const std::string& message) const;
  std::uint64_t position() const noexcept { return base_ + pos_; }
  bool fill(std::size_t need);

  std::istream& in_;
  std::size_t chunk_size_;
  std::string buf_;
  std::size_t pos_ = 0;
  std::uint64_t base_ = 0;
  bool eof_ = false;

  Phase phase_ = Phase::kProlog;
  std::vector<std::string> open_;  // element stack below the root
  std::string root_;
  std::uint64_t last_row_end_ = 0;
  std::uint64_t rows_read_ = 0;
  AttributeMap scratch_;
};

}  // namespace soaccept::ingest
