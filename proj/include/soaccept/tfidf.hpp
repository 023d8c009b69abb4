#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "soaccept/text.hpp"

namespace soaccept::features {

// Sparse vector: (term index, weight) pairs sorted by index.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

// Document frequencies over a corpus of Q&A documents. Term weights follow
//   w(t,d) = (0.5 + 0.5 * tf(t,d) / max_{t' in d} tf(t',d)) * log(N / df(t)).
class TfIdfModel {
 public:
  TfIdfModel() = default;
  TfIdfModel(std::vector<std::string> terms, std::vector<std::uint32_t> df, std::size_t n_docs);

  std::size_t n_docs() const noexcept { return n_docs_; }
  std::size_t vocabulary_size() const noexcept { return terms_.size(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::uint32_t>& document_frequencies() const noexcept { return df_; }

  // Index of a term, or -1 if it is not in the vocabulary.
  std::int64_t index_of(const std::string& term) const;
  double idf(std::uint32_t index) const { return idf_[index]; }
  double idf(const std::string& term) const;

 private:
  std::vector<std::string> terms_;  // sorted; index = position
  std::vector<std::uint32_t> df_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t n_docs_ = 0;
};

// Throws DataError on an empty corpus.
TfIdfModel fit_tfidf(std::span<const text::TokenStream> corpus);

// Terms not in the vocabulary contribute nothing, but still count toward
// the document's maximum raw term frequency.
SparseVector tfidf_vector(const TfIdfModel& model, const text::TokenStream& doc);

// Q.A / (|Q| |A|), 0 when either vector is zero; clamped to [0, 1].
double cosine_similarity(const SparseVector& q, const SparseVector& a);
// Dense form; clamped to [-1, 1].
double cosine_similarity(std::span<const double> q, std::span<const double> a);

}  // namespace soaccept::features
