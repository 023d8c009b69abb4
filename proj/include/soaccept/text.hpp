#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace soaccept::text {

// An answer body separated into readable prose and raw code.
struct AnswerParts {
  std::string prose_text;               // HTML removed, entities decoded
  std::vector<std::string> code_blocks;  // one entry per maximal <code> span
  std::vector<std::string> urls;         // http(s) URLs in prose and link targets
  bool unclosed_code = false;            // a <code> ran to the end of the body
};

AnswerParts split_code_blocks(std::string_view html);

// Decodes HTML character references (&lt; &#39; &#x27; ...). Unknown named
// references are left as-is.
std::string decode_entities(std::string_view text);

// http:// and https:// URLs found in plain text.
std::vector<std::string> find_urls(std::string_view text);

class StopList {
 public:
  // One word per line; blank lines and lines starting with '#' are ignored.
  static StopList parse(std::string_view text);
  static StopList bundled();

  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

struct TokenStream {
  std::vector<std::string> tokens;

  bool empty() const noexcept { return tokens.empty(); }
  std::size_t size() const noexcept { return tokens.size(); }
  friend bool operator==(const TokenStream&, const TokenStream&) = default;
};

std::vector<std::string> remove_stop_words(std::vector<std::string> tokens, const StopList& stop);

// Lowercased maximal letter runs; digits, punctuation and whitespace all
// separate words.
std::vector<std::string> words(std::string_view text);

// words() -> remove_stop_words -> porter_stem on ASCII words. Words with
// non-ASCII letters are kept unstemmed.
TokenStream tokenize(std::string_view text, const StopList& stop);

// Splits after '.', '!' or '?' (or a run of them) when followed by
// whitespace or the end of text. Whitespace-only segments are dropped.
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace soaccept::text
