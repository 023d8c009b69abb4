#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "soaccept/error.hpp"
#include "soaccept/timestamp.hpp"
#include "soaccept/xml_rows.hpp"

namespace soaccept::ingest {

enum class PostType { kQuestion, kAnswer, kOther };

struct PostRow {
  std::int64_t id = 0;
  PostType post_type = PostType::kOther;
  std::optional<std::int64_t> parent_id;           // answers only
  std::optional<std::int64_t> accepted_answer_id;  // questions only
  Timestamp creation_ts{};
  std::int64_t score = 0;
  std::optional<std::int64_t> view_count;
  std::string body;
  std::optional<std::int64_t> owner_user_id;
  std::vector<std::string> tags;  // questions only, lowercase
  std::optional<std::int64_t> answer_count;
  std::int64_t comment_count = 0;

  friend bool operator==(const PostRow&, const PostRow&) = default;
};

struct UserRow {
  std::int64_t id = 0;
  std::int64_t reputation = 0;
  Timestamp creation_ts{};

  friend bool operator==(const UserRow&, const UserRow&) = default;
};

struct AnswerEntry {
  PostRow post;
  UserRow answerer;
  bool accepted = false;

  friend bool operator==(const AnswerEntry&, const AnswerEntry&) = default;
};

// One question with its surviving answers; answers sorted by id.
struct QARecord {
  PostRow question;
  std::vector<AnswerEntry> answers;

  friend bool operator==(const QARecord&, const QARecord&) = default;
};

struct IngestFilter {
  std::set<std::string> tags_any_of;  // empty = accept every tag
  int year_start = 2014;
  int year_end = 2016;
  // When false, questions without an accepted answer are kept with every
  // answer labelled unaccepted.
  bool require_accepted = true;

  void validate() const;
};

// Thrown when a row is missing a required attribute or carries a value that
// cannot be parsed or violates a row invariant. attribute() names the field.
class DecodeError : public DataError {
 public:
  DecodeError(std::string attribute, const std::string& detail);
  const std::string& attribute() const noexcept { return attribute_; }

 private:
  std::string attribute_;
};

PostRow decode_post(const AttributeMap& attrs);
UserRow decode_user(const AttributeMap& attrs);

// Parses "<java><arrays>" or "|java|arrays|" into lowercase tags.
std::vector<std::string> parse_tags(std::string_view text);

// Counts per discard reason. Keys are stable identifiers written to
// ingest_report.json.
struct IngestReport {
  std::map<std::string, std::int64_t> counts;

  void add(const std::string& reason, std::int64_t n = 1) { counts[reason] += n; }
  std::int64_t get(const std::string& reason) const {
    auto it = counts.find(reason);
    return it == counts.end() ? 0 : it->second;
  }
};

struct DatasetResult {
  std::vector<QARecord> records;
  IngestReport report;
};

// Accumulates posts in any order and assembles QARecords. Questions that fail
// the tag or year filter are dropped on arrival; answers are held until
// finish() because their question may arrive later.
class DatasetBuilder {
 public:
  explicit DatasetBuilder(IngestFilter filter);

  void add(PostRow post);
  DatasetResult finish(const std::unordered_map<std::int64_t, UserRow>& users) &&;

 private:
  IngestFilter filter_;
  IngestReport report_;
  std::map<std::int64_t, PostRow> questions_;
  std::unordered_map<std::int64_t, std::vector<PostRow>> answers_by_parent_;
};

DatasetResult build_dataset(std::span<const PostRow> posts,
                            const std::unordered_map<std::int64_t, UserRow>& users,
                            const IngestFilter& filter);

// Streams Posts.xml / Users.xml through RowReader and the decoders.
DatasetResult ingest_posts(std::istream& posts_xml, const std::unordered_map<std::int64_t, UserRow>& users,
                           const IngestFilter& filter);
std::unordered_map<std::int64_t, UserRow> read_users(std::istream& users_xml);

// Checks every QARecord invariant; returns an empty string when valid,
// otherwise a description of the first violation.
std::string check_record(const QARecord& record, bool require_accepted = true);

}  // namespace soaccept::ingest
