#include "soaccept/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "soaccept/error.hpp"

namespace soaccept::features {

TfIdfModel::TfIdfModel(std::vector<std::string> terms, std::vector<std::uint32_t> df, std::size_t n_docs)
    : terms_(std::move(terms)), df_(std::move(df)), n_docs_(n_docs) {
  if (terms_.size() != df_.size()) throw DataError("tf-idf model: vocabulary and df sizes differ");
  idf_.resize(terms_.size());
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (df_[i] == 0 || df_[i] > n_docs_) throw DataError("tf-idf model: df out of range for '" + terms_[i] + "'");
    idf_[i] = std::log(static_cast<double>(n_docs_) / static_cast<double>(df_[i]));
    if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second)
      throw DataError("tf-idf model: duplicate term '" + terms_[i] + "'");
  }
}

std::int64_t TfIdfModel::index_of(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

double TfIdfModel::idf(const std::string& term) const {
  const auto i = index_of(term);
  return i < 0 ? 0.0 : idf_[static_cast<std::size_t>(i)];
}

TfIdfModel fit_tfidf(std::span<const text::TokenStream> corpus) {
  if (corpus.empty()) throw DataError("fit_tfidf: empty corpus");
  std::map<std::string, std::uint32_t> df;
  for (const auto& doc : corpus) {
    const std::set<std::string> unique(doc.tokens.begin(), doc.tokens.end());
    for (const auto& term : unique) ++df[term];
  }
  std::vector<std::string> terms;
  std::vector<std::uint32_t> counts;
  terms.reserve(df.size());
  counts.reserve(df.size());
  for (auto& [term, count] : df) {
    terms.push_back(term);
    counts.push_back(count);
  }
  return TfIdfModel(std::move(terms), std::move(counts), corpus.size());
}

SparseVector tfidf_vector(const TfIdfModel& model, const text::TokenStream& doc) {
  std::map<std::string_view, std::uint32_t> tf;
  for (const auto& token : doc.tokens) ++tf[token];
  std::uint32_t max_tf = 0;
  for (const auto& [term, count] : tf) max_tf = std::max(max_tf, count);

  SparseVector out;
  for (const auto& [term, count] : tf) {
    const auto index = model.index_of(std::string(term));
    if (index < 0) continue;
    const auto i = static_cast<std::uint32_t>(index);
    const double nf = 0.5 + 0.5 * static_cast<double>(count) / static_cast<double>(max_tf);
    out.emplace_back(i, nf * model.idf(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double cosine_similarity(const SparseVector& q, const SparseVector& a) {
  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < q.size() && j < a.size()) {
    if (q[i].first == a[j].first) {
      dot += q[i++].second * a[j++].second;
    } else if (q[i].first < a[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  double qq = 0.0;
  double aa = 0.0;
  for (const auto& [_, w] : q) qq += w * w;
  for (const auto& [_, w] : a) aa += w * w;
  if (qq == 0.0 || aa == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(qq) * std::sqrt(aa)), 0.0, 1.0);
}

double cosine_similarity(std::span<const double> q, std::span<const double> a) {
  if (q.size() != a.size()) throw DataError("cosine_similarity: dimension mismatch");
  double dot = 0.0;
  double qq = 0.0;
  double aa = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    dot += q[i] * a[i];
    qq += q[i] * q[i];
    aa += a[i] * a[i];
  }
  if (qq == 0.0 || aa == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(qq) * std::sqrt(aa)), -1.0, 1.0);
}

}  // namespace soaccept::features
