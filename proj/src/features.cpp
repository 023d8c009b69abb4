#include "soaccept/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "soaccept/error.hpp"
#include "soaccept/parallel.hpp"
#include "soaccept/utf8.hpp"

namespace soaccept::features {

Matrix FeatureMatrix::to_matrix() const {
  Matrix out(rows.size(), kNumFeatures);
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].values.begin(), rows[r].values.end(), out.row(r).begin());
  return out;
}

Labels FeatureMatrix::labels() const {
  Labels out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out[r] = static_cast<int>(rows[r].label);
  return out;
}

const TextResources& TextResources::bundled() {
  static const TextResources resources{text::StopList::bundled(), PolarityLexicon::bundled(), KeywordSet::bundled()};
  return resources;
}

namespace {

bool is_negator(std::string_view word) {
  static constexpr std::array<std::string_view, 10> kNegators{"not",     "no",     "never", "none",   "nobody",
                                                             "nothing", "neither", "nor",  "cannot", "without"};
  if (std::find(kNegators.begin(), kNegators.end(), word) != kNegators.end()) return true;
  return word.size() > 3 && word.ends_with("n't");
}

// Lowercased runs of letters and apostrophes; U+2019 is read as '.
std::vector<std::string> polarity_words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::size_t b = 0;
    std::size_t e = current.size();
    while (b < e && current[b] == '\'') ++b;
    while (e > b && current[e - 1] == '\'') --e;
    if (e > b) out.push_back(current.substr(b, e - b));
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp = utf8::decode(text, pos);
    if (cp == U'’') cp = U'\'';
    if (cp == U'\'' || utf8::is_letter(cp)) {
      utf8::append(current, utf8::to_lower(cp));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

std::string ascii_lower(std::string s) {
  for (auto& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

struct PreparedAnswer {
  text::AnswerParts parts;
  text::TokenStream prose_tokens;
  text::TokenStream code_tokens;  // lowercased identifiers
  std::vector<std::string> identifiers;
};

struct PreparedRecord {
  text::TokenStream question_tokens;
  std::vector<PreparedAnswer> answers;
  std::vector<TimeFeatures> times;
  bool clock_anomaly = false;
};

PreparedRecord prepare(const ingest::QARecord& record, const TextResources& res) {
  PreparedRecord out;
  const auto question_parts = text::split_code_blocks(record.question.body);
  out.question_tokens = text::tokenize(question_parts.prose_text, res.stop);
  out.answers.reserve(record.answers.size());
  for (const auto& entry : record.answers) {
    try {
      out.times.push_back(time_features(record.question, entry.post, entry.answerer));
    } catch (const DataError&) {
      out.clock_anomaly = true;
      return out;
    }
    PreparedAnswer a;
    a.parts = text::split_code_blocks(entry.post.body);
    a.prose_tokens = text::tokenize(a.parts.prose_text, res.stop);
    a.identifiers = code_identifiers(a.parts.code_blocks, res.keywords);
    a.code_tokens.tokens.reserve(a.identifiers.size());
    for (const auto& id : a.identifiers) a.code_tokens.tokens.push_back(ascii_lower(id));
    out.answers.push_back(std::move(a));
  }
  return out;
}

text::TokenStream pair_document(const PreparedRecord& rec, const PreparedAnswer& a) {
  text::TokenStream doc;
  doc.tokens.reserve(rec.question_tokens.size() + a.prose_tokens.size() + a.code_tokens.size());
  doc.tokens.insert(doc.tokens.end(), rec.question_tokens.tokens.begin(), rec.question_tokens.tokens.end());
  doc.tokens.insert(doc.tokens.end(), a.prose_tokens.tokens.begin(), a.prose_tokens.tokens.end());
  doc.tokens.insert(doc.tokens.end(), a.code_tokens.tokens.begin(), a.code_tokens.tokens.end());
  return doc;
}

double count_cosine(const std::vector<std::string>& q, const std::vector<std::string>& a) {
  std::unordered_map<std::string_view, std::pair<double, double>> counts;
  for (const auto& t : q) counts[t].first += 1.0;
  for (const auto& t : a) counts[t].second += 1.0;
  double dot = 0.0;
  double qq = 0.0;
  double aa = 0.0;
  for (const auto& [_, c] : counts) {
    dot += c.first * c.second;
    qq += c.first * c.first;
    aa += c.second * c.second;
  }
  if (qq == 0.0 || aa == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(qq) * std::sqrt(aa)), 0.0, 1.0);
}

std::vector<FeatureVector> compute_rows(const ingest::QARecord& record, const PreparedRecord& rec,
                                        const TfIdfModel& model, const TextResources& res) {
  std::vector<FeatureVector> rows;
  rows.reserve(record.answers.size());
  const auto q_vector = tfidf_vector(model, rec.question_tokens);
  const double view_count = static_cast<double>(record.question.view_count.value_or(0));
  for (std::size_t i = 0; i < record.answers.size(); ++i) {
    const auto& entry = record.answers[i];
    const auto& a = rec.answers[i];
    const auto counts = count_features(a.parts, res);
    FeatureVector v;
    v[Feature::kTimelag] = static_cast<double>(rec.times[i].timelag_ms);
    v[Feature::kURLCount] = static_cast<double>(counts.url_count);
    v[Feature::kCommentCount] = static_cast<double>(entry.post.comment_count);
    v[Feature::kReputation] = static_cast<double>(entry.answerer.reputation);
    v[Feature::kTextPolarity] = text_polarity(a.parts.prose_text, res.lexicon);
    v[Feature::kAnswerCount] = static_cast<double>(record.answers.size());
    v[Feature::kViewCount] = view_count;
    v[Feature::kScore] = static_cast<double>(entry.post.score);
    v[Feature::kNumberOfCodeLine] = static_cast<double>(counts.number_of_code_line);
    v[Feature::kNumberOfSentence] = static_cast<double>(counts.number_of_sentence);
    v[Feature::kTextualSimilarity] = count_cosine(rec.question_tokens.tokens, a.prose_tokens.tokens);
    v[Feature::kCodelength] = static_cast<double>(counts.codelength);
    v[Feature::kTFAnswerCode] = cosine_similarity(q_vector, tfidf_vector(model, a.code_tokens));
    v[Feature::kTFAnswerText] = cosine_similarity(q_vector, tfidf_vector(model, a.prose_tokens));
    v[Feature::kSignUpDateTimeLag] = static_cast<double>(rec.times[i].signup_lag_ms);
    v[Feature::kNumberOfWords] = static_cast<double>(a.prose_tokens.size());
    v.label = entry.accepted ? Label::kAccepted : Label::kUnaccepted;
    rows.push_back(v);
  }
  return rows;
}

std::vector<PreparedRecord> prepare_all(std::span<const ingest::QARecord> records, const TextResources& res,
                                        unsigned threads) {
  std::vector<PreparedRecord> prepared(records.size());
  parallel_for(records.size(), threads, [&](std::size_t i) { prepared[i] = prepare(records[i], res); });
  return prepared;
}

FeatureMatrix assemble(std::span<const ingest::QARecord> records, const std::vector<PreparedRecord>& prepared,
                       const TfIdfModel& model, const TextResources& res, ExtractionReport& report,
                       unsigned threads) {
  std::vector<std::vector<FeatureVector>> per_record(records.size());
  parallel_for(records.size(), threads, [&](std::size_t i) {
    if (!prepared[i].clock_anomaly) per_record[i] = compute_rows(records[i], prepared[i], model, res);
  });

  std::vector<std::pair<RowKey, FeatureVector>> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (prepared[i].clock_anomaly) {
      report.add("question_answer_before_question");
      continue;
    }
    if (!records[i].question.view_count) report.add("question_view_count_missing");
    for (std::size_t j = 0; j < per_record[i].size(); ++j) {
      if (prepared[i].times[j].signup_after_answer) report.add("answer_signup_after_answer");
      if (prepared[i].answers[j].parts.unclosed_code) report.add("answer_unclosed_code");
      rows.emplace_back(RowKey{records[i].question.id, records[i].answers[j].post.id}, per_record[i][j]);
    }
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (rows[k - 1].first == rows[k].first)
      throw DataError("duplicate answer " + std::to_string(rows[k].first.answer_id) + " in question " +
                      std::to_string(rows[k].first.question_id));

  FeatureMatrix out;
  out.rows.reserve(rows.size());
  out.keys.reserve(rows.size());
  for (auto& [key, row] : rows) {
    out.keys.push_back(key);
    out.rows.push_back(row);
  }
  report.add("rows", static_cast<std::int64_t>(out.size()));
  return out;
}

}  // namespace

double text_polarity(std::string_view text, const PolarityLexicon& lexicon) {
  const auto tokens = polarity_words(text);
  double sum = 0.0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const double* valence = lexicon.find(tokens[i]);
    if (valence == nullptr) continue;
    const bool negated = i > 0 && is_negator(tokens[i - 1]);
    sum += negated ? -*valence : *valence;
    ++matched;
  }
  if (matched == 0) return 0.0;
  return std::clamp(sum / static_cast<double>(matched), -1.0, 1.0);
}

double vector_concordance_similarity(std::string_view question_text, std::string_view answer_text,
                                     const text::StopList& stop) {
  return count_cosine(text::tokenize(question_text, stop).tokens, text::tokenize(answer_text, stop).tokens);
}

std::vector<std::string> code_identifiers(std::span<const std::string> code_blocks, const KeywordSet& keywords) {
  std::vector<std::string> out;
  for (const auto& code : code_blocks) {
    std::size_t i = 0;
    while (i < code.size()) {
      if (is_ident_start(code[i]) && (i == 0 || !is_ident_char(code[i - 1]))) {
        std::size_t j = i + 1;
        while (j < code.size() && is_ident_char(code[j])) ++j;
        std::string word = code.substr(i, j - i);
        if (!keywords.contains(word)) out.push_back(std::move(word));
        i = j;
      } else {
        ++i;
      }
    }
  }
  return out;
}

CountFeatures count_features(const text::AnswerParts& parts, const TextResources& resources) {
  CountFeatures out;
  out.number_of_words = static_cast<std::int64_t>(text::tokenize(parts.prose_text, resources.stop).size());
  out.number_of_sentence = static_cast<std::int64_t>(text::split_sentences(parts.prose_text).size());
  out.url_count = static_cast<std::int64_t>(parts.urls.size());
  for (const auto& code : parts.code_blocks) {
    std::size_t pos = 0;
    while (pos <= code.size()) {
      auto eol = code.find('\n', pos);
      if (eol == std::string::npos) eol = code.size();
      const auto line = std::string_view(code).substr(pos, eol - pos);
      if (line.find_first_not_of(" \t\r\f\v") != std::string_view::npos) ++out.number_of_code_line;
      pos = eol + 1;
    }
  }
  out.codelength = static_cast<std::int64_t>(code_identifiers(parts.code_blocks, resources.keywords).size());
  return out;
}

TimeFeatures time_features(const ingest::PostRow& question, const ingest::PostRow& answer,
                           const ingest::UserRow& user) {
  TimeFeatures out;
  out.timelag_ms = millis_between(question.creation_ts, answer.creation_ts);
  if (out.timelag_ms < 0)
    throw DataError("answer " + std::to_string(answer.id) + " predates question " + std::to_string(question.id));
  out.signup_lag_ms = millis_between(user.creation_ts, answer.creation_ts);
  out.signup_after_answer = out.signup_lag_ms < 0;
  return out;
}

ExtractionResult extract_matrix(std::span<const ingest::QARecord> records, const TextResources& resources,
                                unsigned threads) {
  ExtractionResult result;
  const auto prepared = prepare_all(records, resources, threads);
  std::vector<text::TokenStream> corpus;
  for (const auto& rec : prepared) {
    if (rec.clock_anomaly) continue;
    for (const auto& a : rec.answers) corpus.push_back(pair_document(rec, a));
  }
  if (!corpus.empty()) result.model = fit_tfidf(corpus);
  result.matrix = assemble(records, prepared, result.model, resources, result.report, threads);
  return result;
}

FeatureMatrix extract_with_model(std::span<const ingest::QARecord> records, const TfIdfModel& model,
                                 const TextResources& resources, ExtractionReport& report, unsigned threads) {
  const auto prepared = prepare_all(records, resources, threads);
  return assemble(records, prepared, model, resources, report, threads);
}

}  // namespace soaccept::features
