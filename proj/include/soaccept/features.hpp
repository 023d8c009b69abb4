#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soaccept/dump.hpp"
#include "soaccept/lexicon.hpp"
#include "soaccept/matrix.hpp"
#include "soaccept/text.hpp"
#include "soaccept/tfidf.hpp"

namespace soaccept::features {

inline constexpr std::size_t kNumFeatures = 16;

enum class Feature : std::size_t {
  kTimelag,
  kURLCount,
  kCommentCount,
  kReputation,
  kTextPolarity,
  kAnswerCount,
  kViewCount,
  kScore,
  kNumberOfCodeLine,
  kNumberOfSentence,
  kTextualSimilarity,
  kCodelength,
  kTFAnswerCode,
  kTFAnswerText,
  kSignUpDateTimeLag,
  kNumberOfWords,
};

// Column order of the modeling matrix and of features.csv.
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames{
    "Timelag",          "URLCount",          "CommentCount", "Reputation",       "TextPolarity",  "AnswerCount",
    "ViewCount",        "Score",             "NumberOfCodeLine", "NumberOfSentence", "TextualSimilarity",
    "Codelength",       "TFAnswerCode",      "TFAnswerText", "SignUpDateTimeLag", "NumberOfWords",
};

enum class Label : int { kUnaccepted = 0, kAccepted = 1 };

struct FeatureVector {
  std::array<double, kNumFeatures> values{};
  Label label = Label::kUnaccepted;

  double& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
  double operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct RowKey {
  std::int64_t question_id = 0;
  std::int64_t answer_id = 0;
  friend auto operator<=>(const RowKey&, const RowKey&) = default;
};

// Rows ordered by (question id, answer id).
struct FeatureMatrix {
  std::vector<FeatureVector> rows;
  std::vector<RowKey> keys;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
  Matrix to_matrix() const;
  Labels labels() const;
};

struct TextResources {
  text::StopList stop;
  PolarityLexicon lexicon;
  KeywordSet keywords;

  static const TextResources& bundled();
};

// Mean valence of lexicon words in the text, with the sign flipped when the
// preceding word is a negator. 0 when no word matches.
double text_polarity(std::string_view text, const PolarityLexicon& lexicon);

// Cosine of raw token-count vectors over the pair's union vocabulary.
double vector_concordance_similarity(std::string_view question_text, std::string_view answer_text,
                                     const text::StopList& stop);

// Identifiers ([A-Za-z_][A-Za-z0-9_]*) in code, reserved words removed.
std::vector<std::string> code_identifiers(std::span<const std::string> code_blocks, const KeywordSet& keywords);

struct CountFeatures {
  std::int64_t number_of_words = 0;
  std::int64_t number_of_sentence = 0;
  std::int64_t url_count = 0;
  std::int64_t number_of_code_line = 0;
  std::int64_t codelength = 0;
};

CountFeatures count_features(const text::AnswerParts& parts, const TextResources& resources);

struct TimeFeatures {
  std::int64_t timelag_ms = 0;
  std::int64_t signup_lag_ms = 0;
  bool signup_after_answer = false;
};

// Throws DataError when the answer predates its question.
TimeFeatures time_features(const ingest::PostRow& question, const ingest::PostRow& answer,
                           const ingest::UserRow& user);

// Counts keyed by stable identifiers, written to the stage report.
struct ExtractionReport {
  std::map<std::string, std::int64_t> counts;

  void add(const std::string& key, std::int64_t n = 1) { counts[key] += n; }
  std::int64_t get(const std::string& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }
};

struct ExtractionResult {
  FeatureMatrix matrix;
  TfIdfModel model;
  ExtractionReport report;
};

// Fits the tf-idf model on every (question, answer) document of the run and
// computes one row per answer. Questions with an answer that predates them
// are dropped whole and counted in the report.
ExtractionResult extract_matrix(std::span<const ingest::QARecord> records, const TextResources& resources,
                                unsigned threads = 1);

// Same per-answer computation against an existing model.
FeatureMatrix extract_with_model(std::span<const ingest::QARecord> records, const TfIdfModel& model,
                                 const TextResources& resources, ExtractionReport& report, unsigned threads = 1);

}  // namespace soaccept::features
