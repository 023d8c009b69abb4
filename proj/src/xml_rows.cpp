#include "soaccept/xml_rows.hpp"

#include "soaccept/utf8.hpp"

namespace soaccept::ingest {

namespace {

bool is_space(int c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(int c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' || c >= 0x80;
}

bool is_name_char(int c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool is_xml_char(char32_t cp) {
  return cp == 0x9 || cp == 0xA || cp == 0xD || (cp >= 0x20 && cp <= 0xD7FF) ||
         (cp >= 0xE000 && cp <= 0xFFFD) || (cp >= 0x10000 && cp <= 0x10FFFF);
}

}  // namespace

XmlError::XmlError(const std::string& message, std::uint64_t offset, std::uint64_t last_row_end)
    : DataError(message + " (byte " + std::to_string(offset) + ", last complete row ends at byte " +
                std::to_string(last_row_end) + ")"),
      offset_(offset),
      last_row_end_(last_row_end) {}

RowReader::RowReader(std::istream& in, std::size_t chunk_size)
    : in_(in), chunk_size_(chunk_size == 0 ? 1 : chunk_size) {}

bool RowReader::fill(std::size_t need) {
  while (buf_.size() - pos_ < need && !eof_) {
    if (pos_ > 0) {
      buf_.erase(0, pos_);
      base_ += pos_;
      pos_ = 0;
    }
    const std::size_t old = buf_.size();
    buf_.resize(old + chunk_size_);
    in_.read(buf_.data() + old, static_cast<std::streamsize>(chunk_size_));
    const auto got = static_cast<std::size_t>(in_.gcount());
    buf_.resize(old + got);
    if (got == 0) eof_ = true;
  }
  return buf_.size() - pos_ >= need;
}

int RowReader::peek(std::size_t ahead) {
  if (pos_ + ahead >= buf_.size() && !fill(ahead + 1)) return -1;
  return static_cast<unsigned char>(buf_[pos_ + ahead]);
}

int RowReader::get() {
  const int c = peek();
  if (c >= 0) ++pos_;
  return c;
}

bool RowReader::starts_with(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (peek(i) != static_cast<unsigned char>(s[i])) return false;
  return true;
}

void RowReader::expect(std::string_view s) {
  if (!starts_with(s)) {
    if (peek() < 0) fail("unexpected end of input, expected '" + std::string(s) + "'");
    fail("expected '" + std::string(s) + "'");
  }
  pos_ += s.size();
}

void RowReader::skip_until(std::string_view terminator, const char* what) {
  for (;;) {
    if (starts_with(terminator)) {
      pos_ += terminator.size();
      return;
    }
    if (get() < 0) fail(std::string("unexpected end of input inside ") + what);
  }
}

void RowReader::skip_whitespace() {
  while (is_space(peek())) ++pos_;
}

void RowReader::fail(const std::string& message) const {
  throw XmlError(message, position(), last_row_end_);
}

std::string RowReader::read_name() {
  int c = peek();
  if (c < 0) fail("unexpected end of input, expected a name");
  if (!is_name_start(c)) fail("invalid name start character");
  std::string name;
  while (is_name_char(c = peek())) {
    name.push_back(static_cast<char>(c));
    ++pos_;
  }
  return name;
}

void RowReader::append_reference(std::string& out) {
  // '&' already consumed.
  std::string ref;
  for (;;) {
    const int c = get();
    if (c < 0) fail("unexpected end of input inside entity reference");
    if (c == ';') break;
    if (ref.size() > 32 || is_space(c) || c == '<' || c == '&') fail("unterminated entity reference");
    ref.push_back(static_cast<char>(c));
  }
  if (!ref.empty() && ref[0] == '#') {
    const bool hex = ref.size() > 1 && ref[1] == 'x';
    const std::size_t start = hex ? 2 : 1;
    if (start >= ref.size()) fail("empty character reference");
    char32_t cp = 0;
    for (std::size_t i = start; i < ref.size(); ++i) {
      const char ch = ref[i];
      int digit;
      if (ch >= '0' && ch <= '9') {
        digit = ch - '0';
      } else if (hex && ch >= 'a' && ch <= 'f') {
        digit = ch - 'a' + 10;
      } else if (hex && ch >= 'A' && ch <= 'F') {
        digit = ch - 'A' + 10;
      } else {
        fail("invalid character reference '&" + ref + ";'");
      }
      cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(digit);
      if (cp > 0x10FFFF) fail("character reference out of range");
    }
    if (!is_xml_char(cp)) fail("character reference to an illegal character");
    utf8::append(out, cp);
    return;
  }
  if (ref == "lt") {
    out.push_back('<');
  } else if (ref == "gt") {
    out.push_back('>');
  } else if (ref == "amp") {
    out.push_back('&');
  } else if (ref == "quot") {
    out.push_back('"');
  } else if (ref == "apos") {
    out.push_back('\'');
  } else {
    fail("undefined entity '&" + ref + ";'");
  }
}

void RowReader::read_attributes(AttributeMap& attrs, bool& self_closing) {
  attrs.clear();
  for (;;) {
    const bool had_space = is_space(peek());
    skip_whitespace();
    const int c = peek();
    if (c < 0) fail("unexpected end of input inside tag");
    if (c == '>') {
      ++pos_;
      self_closing = false;
      return;
    }
    if (c == '/') {
      ++pos_;
      expect(">");
      self_closing = true;
      return;
    }
    if (!had_space) fail("expected whitespace before attribute");
    std::string name = read_name();
    skip_whitespace();
    expect("=");
    skip_whitespace();
    const int quote = get();
    if (quote != '"' && quote != '\'') {
      if (quote < 0) fail("unexpected end of input inside tag");
      fail("attribute value must be quoted");
    }
    std::string value;
    for (;;) {
      const int v = get();
      if (v < 0) fail("unexpected end of input inside attribute value");
      if (v == quote) break;
      if (v == '<') fail("'<' in attribute value");
      if (v == '&') {
        append_reference(value);
      } else if (v == '\r') {
        if (peek() == '\n') ++pos_;
        value.push_back(' ');
      } else if (v == '\n' || v == '\t') {
        value.push_back(' ');
      } else {
        value.push_back(static_cast<char>(v));
      }
    }
    if (!attrs.emplace(std::move(name), std::move(value)).second) fail("duplicate attribute");
  }
}

void RowReader::skip_text() {
  std::string sink;
  for (;;) {
    const int c = peek();
    if (c < 0 || c == '<') return;
    ++pos_;
    if (c == '&') {
      sink.clear();
      append_reference(sink);
    }
  }
}

void RowReader::skip_doctype() {
  expect("<!DOCTYPE");
  int depth = 0;
  for (;;) {
    const int c = get();
    if (c < 0) fail("unexpected end of input inside DOCTYPE");
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == '>' && depth <= 0) return;
  }
}

bool RowReader::next(AttributeMap& row) {
  for (;;) {
    switch (phase_) {
      case Phase::kDone:
        return false;

      case Phase::kProlog: {
        if (position() == 0 && starts_with("\xEF\xBB\xBF")) pos_ += 3;
        skip_whitespace();
        const int c = peek();
        if (c < 0) fail("document has no root element");
        if (c != '<') fail("text before root element");
        if (starts_with("<?")) {
          skip_until("?>", "processing instruction");
        } else if (starts_with("<!--")) {
          skip_until("-->", "comment");
        } else if (starts_with("<!DOCTYPE")) {
          skip_doctype();
        } else {
          ++pos_;
          root_ = read_name();
          bool self_closing = false;
          read_attributes(scratch_, self_closing);
          phase_ = self_closing ? Phase::kEpilog : Phase::kBody;
        }
        break;
      }

      case Phase::kBody: {
        const int c = peek();
        if (c < 0) {
          const std::string open = open_.empty() ? root_ : open_.back();
          fail("unexpected end of input, element <" + open + "> not closed");
        }
        if (c != '<') {
          skip_text();
        } else if (starts_with("<!--")) {
          skip_until("-->", "comment");
        } else if (starts_with("<![CDATA[")) {
          skip_until("]]>", "CDATA section");
        } else if (starts_with("<?")) {
          skip_until("?>", "processing instruction");
        } else if (starts_with("</")) {
          pos_ += 2;
          const std::string name = read_name();
          skip_whitespace();
          expect(">");
          if (open_.empty()) {
            if (name != root_) fail("mismatched end tag </" + name + ">, expected </" + root_ + ">");
            phase_ = Phase::kEpilog;
            break;
          }
          if (name != open_.back()) fail("mismatched end tag </" + name + ">, expected </" + open_.back() + ">");
          open_.pop_back();
          if (open_.empty() && name == "row") {
            last_row_end_ = position();
            ++rows_read_;
            return true;
          }
        } else if (starts_with("<!")) {
          fail("unexpected markup declaration");
        } else {
          ++pos_;
          std::string name = read_name();
          const bool is_row = open_.empty() && name == "row";
          bool self_closing = false;
          read_attributes(is_row ? row : scratch_, self_closing);
          if (self_closing) {
            if (is_row) {
              last_row_end_ = position();
              ++rows_read_;
              return true;
            }
          } else {
            open_.push_back(std::move(name));
          }
        }
        break;
      }

      case Phase::kEpilog: {
        skip_whitespace();
        const int c = peek();
        if (c < 0) {
          phase_ = Phase::kDone;
        } else if (starts_with("<!--")) {
          skip_until("-->", "comment");
        } else if (starts_with("<?")) {
          skip_until("?>", "processing instruction");
        } else {
          fail("content after the root element");
        }
        break;
      }
    }
  }
}

}  // namespace soaccept::ingest
