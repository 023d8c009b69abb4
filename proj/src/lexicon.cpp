#include "soaccept/lexicon.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "soaccept/bundled.hpp"
#include "soaccept/error.hpp"

namespace soaccept::features {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    const auto line = trim(text.substr(pos, eol - pos));
    if (!line.empty() && line.front() != '#') fn(line, line_no);
    pos = eol + 1;
  }
}

}  // namespace

PolarityLexicon PolarityLexicon::parse(std::string_view tsv) {
  PolarityLexicon lexicon;
  for_each_line(tsv, [&](std::string_view line, std::size_t line_no) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw DataError("polarity lexicon line " + std::to_string(line_no) + ": expected word<TAB>valence");
    const auto word = trim(line.substr(0, tab));
    const auto number = trim(line.substr(tab + 1));
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc{} || ptr != number.data() + number.size() || !std::isfinite(value) || value < -1.0 ||
        value > 1.0)
      throw DataError("polarity lexicon line " + std::to_string(line_no) + ": valence must be in [-1, 1]");
    lexicon.valence_.insert_or_assign(std::string(word), value);
  });
  return lexicon;
}

PolarityLexicon PolarityLexicon::bundled() {
  static const PolarityLexicon lexicon = parse(soaccept::bundled::polarity_lexicon());
  return lexicon;
}

KeywordSet KeywordSet::parse(std::string_view text) {
  KeywordSet set;
  for_each_line(text, [&](std::string_view line, std::size_t) { set.words_.emplace(line); });
  return set;
}

KeywordSet KeywordSet::bundled() {
  static const KeywordSet set = [] {
    auto s = parse(soaccept::bundled::keywords_java());
    s.merge(parse(soaccept::bundled::keywords_js()));
    return s;
  }();
  return set;
}

}  // namespace soaccept::features
