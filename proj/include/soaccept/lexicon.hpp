#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace soaccept::features {

// word -> valence in [-1, 1], read from "word<TAB>valence" lines.
class PolarityLexicon {
 public:
  static PolarityLexicon parse(std::string_view tsv);
  static PolarityLexicon bundled();

  const double* find(std::string_view word) const {
    auto it = valence_.find(std::string(word));
    return it == valence_.end() ? nullptr : &it->second;
  }
  std::size_t size() const noexcept { return valence_.size(); }

 private:
  std::unordered_map<std::string, double> valence_;
};

// Reserved words excluded from identifier counts.
class KeywordSet {
 public:
  static KeywordSet parse(std::string_view text);
  // Java and JavaScript lists combined.
  static KeywordSet bundled();

  void merge(const KeywordSet& other) { words_.insert(other.words_.begin(), other.words_.end()); }
  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

}  // namespace soaccept::features
