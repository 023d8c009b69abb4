#include "soaccept/text.hpp"

#include <algorithm>
#include <array>

#include "soaccept/bundled.hpp"
#include "soaccept/porter.hpp"
#include "soaccept/utf8.hpp"

namespace soaccept::text {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool iequals_prefix(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > text.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (lower(text[pos + i]) != prefix[i]) return false;
  return true;
}

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

constexpr std::array<std::string_view, 22> kBlockTags{
    "p",  "div", "br", "li", "ul", "ol", "pre",        "h1", "h2", "h3", "h4",
    "h5", "h6",  "hr", "tr", "td", "th", "blockquote", "table", "dl", "dt", "dd"};

struct Tag {
  std::string name;  // lowercase
  bool closing = false;
  std::size_t end = 0;  // index one past '>'
  std::string_view inside;  // text between '<' and '>'
};

// Recognises a tag starting at html[pos] == '<'. Returns false for a '<'
// that does not open markup (e.g. "a < b").
bool read_tag(std::string_view html, std::size_t pos, Tag& tag) {
  std::size_t i = pos + 1;
  if (i >= html.size()) return false;
  tag.closing = html[i] == '/';
  if (tag.closing) ++i;
  if (i >= html.size() || !is_ascii_alpha(html[i])) return false;
  tag.name.clear();
  while (i < html.size() && (is_ascii_alpha(html[i]) || (html[i] >= '0' && html[i] <= '9'))) {
    tag.name.push_back(lower(html[i]));
    ++i;
  }
  char quote = 0;
  for (; i < html.size(); ++i) {
    const char c = html[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      tag.end = i + 1;
      tag.inside = html.substr(pos + 1, i - pos - 1);
      return true;
    }
  }
  return false;
}

std::string attribute_value(std::string_view inside, std::string_view name) {
  std::size_t pos = 0;
  while ((pos = inside.find(name, pos)) != std::string_view::npos) {
    const bool boundary = pos > 0 && is_space(inside[pos - 1]);
    std::size_t i = pos + name.size();
    pos = i;
    if (!boundary) continue;
    while (i < inside.size() && is_space(inside[i])) ++i;
    if (i >= inside.size() || inside[i] != '=') continue;
    ++i;
    while (i < inside.size() && is_space(inside[i])) ++i;
    if (i >= inside.size()) break;
    const char quote = inside[i];
    if (quote == '"' || quote == '\'') {
      const auto close = inside.find(quote, i + 1);
      if (close == std::string_view::npos) break;
      return decode_entities(inside.substr(i + 1, close - i - 1));
    }
    std::size_t end = i;
    while (end < inside.size() && !is_space(inside[end])) ++end;
    return decode_entities(inside.substr(i, end - i));
  }
  return {};
}

// Text of a code span with any inner markup removed.
std::string strip_tags(std::string_view html) {
  std::string out;
  Tag tag;
  for (std::size_t i = 0; i < html.size();) {
    if (html[i] == '<' && read_tag(html, i, tag)) {
      i = tag.end;
    } else {
      out.push_back(html[i++]);
    }
  }
  return decode_entities(out);
}

bool is_http_url(std::string_view s) {
  return iequals_prefix(s, 0, "http://") || iequals_prefix(s, 0, "https://");
}

}  // namespace

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out.push_back(text[i]);
      continue;
    }
    const auto semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back('&');
      continue;
    }
    const auto ref = text.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    bool ok = true;
    if (!ref.empty() && ref[0] == '#') {
      const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
      const std::size_t start = hex ? 2 : 1;
      ok = start < ref.size();
      for (std::size_t k = start; ok && k < ref.size(); ++k) {
        const char c = ref[k];
        int digit = -1;
        if (c >= '0' && c <= '9') digit = c - '0';
        if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        ok = digit >= 0;
        cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(std::max(digit, 0));
        if (cp > 0x10FFFF) ok = false;
      }
      if (ok && (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF))) cp = utf8::kReplacement;
    } else if (ref == "lt") {
      cp = '<';
    } else if (ref == "gt") {
      cp = '>';
    } else if (ref == "amp") {
      cp = '&';
    } else if (ref == "quot") {
      cp = '"';
    } else if (ref == "apos") {
      cp = '\'';
    } else if (ref == "nbsp") {
      cp = 0xA0;
    } else if (ref == "hellip") {
      cp = 0x2026;
    } else if (ref == "mdash") {
      cp = 0x2014;
    } else if (ref == "ndash") {
      cp = 0x2013;
    } else if (ref == "lsquo") {
      cp = 0x2018;
    } else if (ref == "rsquo") {
      cp = 0x2019;
    } else if (ref == "ldquo") {
      cp = 0x201C;
    } else if (ref == "rdquo") {
      cp = 0x201D;
    } else if (ref == "copy") {
      cp = 0xA9;
    } else {
      ok = false;
    }
    if (!ok) {
      out.push_back('&');
      continue;
    }
    utf8::append(out, cp);
    i = semi;
  }
  return out;
}

std::vector<std::string> find_urls(std::string_view text) {
  std::vector<std::string> urls;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t scheme = 0;
    if (iequals_prefix(text, i, "https://")) {
      scheme = 8;
    } else if (iequals_prefix(text, i, "http://")) {
      scheme = 7;
    }
    if (scheme == 0 || (i > 0 && is_ascii_alpha(text[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t end = i + scheme;
    while (end < text.size() && !is_space(text[end]) && text[end] != '<' && text[end] != '>' &&
           text[end] != '"' && text[end] != '\'' && text[end] != '`')
      ++end;
    std::size_t trimmed = end;
    while (trimmed > i + scheme && std::string_view(".,;:!?)]}").find(text[trimmed - 1]) != std::string_view::npos)
      --trimmed;
    if (trimmed > i + scheme) urls.emplace_back(text.substr(i, trimmed - i));
    i = end;
  }
  return urls;
}

AnswerParts split_code_blocks(std::string_view html) {
  AnswerParts parts;
  std::string& prose = parts.prose_text;
  std::vector<std::string> link_urls;
  char pending = 0;
  bool in_anchor = false;
  std::string anchor_href;
  std::string anchor_text;

  auto mark_boundary = [&](char sep) {
    if (sep == '\n' || pending == 0) pending = sep;
  };
  auto append_text = [&](std::string_view raw) {
    if (raw.empty()) return;
    const std::string decoded = decode_entities(raw);
    if (pending && !prose.empty() && !is_space(prose.back()) && !is_space(decoded.front()))
      prose.push_back(pending);
    pending = 0;
    prose += decoded;
    if (in_anchor) anchor_text += decoded;
  };

  std::size_t text_start = 0;
  std::size_t i = 0;
  Tag tag;
  while (i < html.size()) {
    if (html[i] != '<') {
      ++i;
      continue;
    }
    if (html.compare(i, 4, "<!--") == 0) {
      append_text(html.substr(text_start, i - text_start));
      const auto close = html.find("-->", i + 4);
      i = close == std::string_view::npos ? html.size() : close + 3;
      text_start = i;
      continue;
    }
    if (!read_tag(html, i, tag)) {
      ++i;
      continue;
    }
    append_text(html.substr(text_start, i - text_start));
    i = tag.end;
    text_start = i;

    if (tag.name == "code") {
      if (tag.closing) continue;  // stray end tag
      // Find the matching </code>, honouring nested <code> tags.
      int depth = 1;
      std::size_t j = i;
      std::size_t content_end = html.size();
      Tag inner;
      while (j < html.size()) {
        if (html[j] == '<' && read_tag(html, j, inner)) {
          if (inner.name == "code") {
            depth += inner.closing ? -1 : 1;
            if (depth == 0) {
              content_end = j;
              j = inner.end;
              break;
            }
          }
          j = inner.end;
        } else {
          ++j;
        }
      }
      if (depth != 0) {
        parts.unclosed_code = true;
        j = html.size();
      }
      parts.code_blocks.push_back(strip_tags(html.substr(i, content_end - i)));
      mark_boundary(' ');
      i = j;
      text_start = i;
      continue;
    }
    if (tag.name == "a") {
      if (!tag.closing) {
        in_anchor = true;
        anchor_href = attribute_value(tag.inside, "href");
        anchor_text.clear();
      } else if (in_anchor) {
        if (is_http_url(anchor_href) && anchor_text.find(anchor_href) == std::string::npos)
          link_urls.push_back(anchor_href);
        in_anchor = false;
      }
      continue;
    }
    if (std::find(kBlockTags.begin(), kBlockTags.end(), tag.name) != kBlockTags.end()) mark_boundary('\n');
  }
  append_text(html.substr(text_start));
  if (in_anchor && is_http_url(anchor_href) && anchor_text.find(anchor_href) == std::string::npos)
    link_urls.push_back(anchor_href);

  parts.urls = std::move(link_urls);
  for (auto& url : find_urls(prose)) parts.urls.push_back(std::move(url));
  return parts;
}

StopList StopList::parse(std::string_view text) {
  StopList list;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
    while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') list.words_.emplace(line);
    pos = eol + 1;
  }
  return list;
}

StopList StopList::bundled() {
  static const StopList list = parse(soaccept::bundled::stopwords());
  return list;
}

std::vector<std::string> remove_stop_words(std::vector<std::string> tokens, const StopList& stop) {
  std::erase_if(tokens, [&](const std::string& t) { return stop.contains(t); });
  return tokens;
}

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::decode(text, pos);
    if (utf8::is_letter(cp)) {
      utf8::append(current, utf8::to_lower(cp));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

TokenStream tokenize(std::string_view text, const StopList& stop) {
  TokenStream stream;
  stream.tokens = remove_stop_words(words(text), stop);
  for (auto& token : stream.tokens) {
    const bool ascii = std::all_of(token.begin(), token.end(),
                                   [](char c) { return static_cast<unsigned char>(c) < 0x80; });
    if (ascii) token = porter_stem(token);
  }
  // A stem can itself be a stop word ("cans" -> "can").
  std::erase_if(stream.tokens, [&](const std::string& t) { return stop.contains(t); });
  return stream;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  auto push = [&](std::string_view segment) {
    while (!segment.empty() && is_space(segment.front())) segment.remove_prefix(1);
    while (!segment.empty() && is_space(segment.back())) segment.remove_suffix(1);
    if (!segment.empty()) sentences.emplace_back(segment);
  };
  auto terminator = [](char c) { return c == '.' || c == '!' || c == '?'; };
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && terminator(text[j])) ++j;
    if (j == text.size() || is_space(text[j])) {
      push(text.substr(start, j - start));
      start = j;
    }
    i = j;
  }
  push(text.substr(start));
  return sentences;
}

}  // namespace soaccept::text
