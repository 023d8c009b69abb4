#include "soaccept/dump.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

namespace soaccept::ingest {

namespace {

const std::string* find(const AttributeMap& attrs, std::string_view key) {
  auto it = attrs.find(key);
  return it == attrs.end() ? nullptr : &it->second;
}

std::int64_t parse_int(const std::string& text, const char* attribute) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw DecodeError(attribute, "not an integer: '" + text + "'");
  return value;
}

std::int64_t required_int(const AttributeMap& attrs, const char* attribute) {
  const auto* v = find(attrs, attribute);
  if (!v) throw DecodeError(attribute, "missing required attribute");
  return parse_int(*v, attribute);
}

std::optional<std::int64_t> optional_int(const AttributeMap& attrs, const char* attribute) {
  const auto* v = find(attrs, attribute);
  if (!v) return std::nullopt;
  return parse_int(*v, attribute);
}

std::optional<std::int64_t> optional_nonnegative(const AttributeMap& attrs, const char* attribute) {
  auto v = optional_int(attrs, attribute);
  if (v && *v < 0) throw DecodeError(attribute, "must be non-negative");
  return v;
}

Timestamp required_timestamp(const AttributeMap& attrs, const char* attribute) {
  const auto* v = find(attrs, attribute);
  if (!v) throw DecodeError(attribute, "missing required attribute");
  auto ts = parse_timestamp(*v);
  if (!ts) throw DecodeError(attribute, "not a timestamp: '" + *v + "'");
  return *ts;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace

DecodeError::DecodeError(std::string attribute, const std::string& detail)
    : DataError(attribute + ": " + detail), attribute_(std::move(attribute)) {}

void IngestFilter::validate() const {
  if (year_start > year_end) throw ConfigError("ingest filter: year_start must not exceed year_end");
}

std::vector<std::string> parse_tags(std::string_view text) {
  std::vector<std::string> tags;
  if (text.empty()) return tags;
  if (text.front() == '<') {
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto open = text.find('<', pos);
      if (open == std::string_view::npos) break;
      const auto close = text.find('>', open + 1);
      if (close == std::string_view::npos) break;
      if (close > open + 1) tags.push_back(lowercase(text.substr(open + 1, close - open - 1)));
      pos = close + 1;
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto bar = text.find('|', pos);
      if (bar == std::string_view::npos) bar = text.size();
      if (bar > pos) tags.push_back(lowercase(text.substr(pos, bar - pos)));
      pos = bar + 1;
    }
  }
  return tags;
}

PostRow decode_post(const AttributeMap& attrs) {
  PostRow post;
  post.id = required_int(attrs, "Id");
  const auto type = required_int(attrs, "PostTypeId");
  post.post_type = type == 1 ? PostType::kQuestion : type == 2 ? PostType::kAnswer : PostType::kOther;
  post.creation_ts = required_timestamp(attrs, "CreationDate");
  post.parent_id = optional_int(attrs, "ParentId");
  post.accepted_answer_id = optional_int(attrs, "AcceptedAnswerId");
  post.score = optional_int(attrs, "Score").value_or(0);
  post.view_count = optional_nonnegative(attrs, "ViewCount");
  if (const auto* body = find(attrs, "Body")) post.body = *body;
  post.owner_user_id = optional_int(attrs, "OwnerUserId");
  if (const auto* tags = find(attrs, "Tags")) post.tags = parse_tags(*tags);
  post.answer_count = optional_nonnegative(attrs, "AnswerCount");
  post.comment_count = optional_nonnegative(attrs, "CommentCount").value_or(0);

  if (post.post_type == PostType::kAnswer) {
    if (!post.parent_id) throw DecodeError("ParentId", "answer without parent");
    if (!post.tags.empty()) throw DecodeError("Tags", "answers carry no tags");
    post.accepted_answer_id.reset();
  } else if (post.post_type == PostType::kQuestion) {
    if (post.parent_id) throw DecodeError("ParentId", "questions have no parent");
  }
  return post;
}

UserRow decode_user(const AttributeMap& attrs) {
  UserRow user;
  user.id = required_int(attrs, "Id");
  user.reputation = required_int(attrs, "Reputation");
  if (user.reputation < 0) throw DecodeError("Reputation", "must be non-negative");
  user.creation_ts = required_timestamp(attrs, "CreationDate");
  return user;
}

DatasetBuilder::DatasetBuilder(IngestFilter filter) : filter_(std::move(filter)) { filter_.validate(); }

void DatasetBuilder::add(PostRow post) {
  switch (post.post_type) {
    case PostType::kOther:
      report_.add("posts_other");
      return;
    case PostType::kAnswer: {
      report_.add("posts_answers");
      const auto parent = *post.parent_id;
      answers_by_parent_[parent].push_back(std::move(post));
      return;
    }
    case PostType::kQuestion:
      break;
  }
  report_.add("posts_questions");
  if (!filter_.tags_any_of.empty() &&
      std::none_of(post.tags.begin(), post.tags.end(),
                   [&](const std::string& t) { return filter_.tags_any_of.contains(t); })) {
    report_.add("question_tag_mismatch");
    return;
  }
  const int year = year_of(post.creation_ts);
  if (year < filter_.year_start || year > filter_.year_end) {
    report_.add("question_year_out_of_range");
    return;
  }
  const auto id = post.id;
  questions_.insert_or_assign(id, std::move(post));
}

DatasetResult DatasetBuilder::finish(const std::unordered_map<std::int64_t, UserRow>& users) && {
  DatasetResult result;
  std::unordered_set<std::int64_t> claimed;
  for (auto& [qid, question] : questions_) {
    std::vector<PostRow> candidates;
    if (auto it = answers_by_parent_.find(qid); it != answers_by_parent_.end()) {
      candidates = std::move(it->second);
      claimed.insert(qid);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const PostRow& a, const PostRow& b) { return a.id < b.id; });

    QARecord record;
    record.question = question;
    bool accepted_seen = false;
    bool accepted_kept = false;
    for (auto& answer : candidates) {
      const bool is_accepted = question.accepted_answer_id && *question.accepted_answer_id == answer.id;
      accepted_seen |= is_accepted;
      if (!answer.owner_user_id) {
        report_.add("answer_unregistered_owner");
        continue;
      }
      if (question.owner_user_id && *answer.owner_user_id == *question.owner_user_id) {
        report_.add("answer_self_authored");
        continue;
      }
      auto user = users.find(*answer.owner_user_id);
      if (user == users.end()) {
        report_.add("answer_unknown_user");
        continue;
      }
      accepted_kept |= is_accepted;
      record.answers.push_back(AnswerEntry{std::move(answer), user->second, is_accepted});
    }

    if (!question.accepted_answer_id) {
      if (filter_.require_accepted) {
        report_.add("question_no_accepted_answer");
        continue;
      }
    } else if (!accepted_seen) {
      report_.add("question_accepted_answer_missing");
      continue;
    } else if (!accepted_kept) {
      report_.add("question_accepted_answer_discarded");
      continue;
    }
    if (record.answers.size() < 2) {
      report_.add("question_too_few_answers");
      continue;
    }
    report_.add("questions_retained");
    report_.add("answers_retained", static_cast<std::int64_t>(record.answers.size()));
    result.records.push_back(std::move(record));
  }
  for (const auto& [parent, answers] : answers_by_parent_)
    if (!claimed.contains(parent)) report_.add("answer_without_retained_question", static_cast<std::int64_t>(answers.size()));
  result.report = std::move(report_);
  return result;
}

DatasetResult build_dataset(std::span<const PostRow> posts,
                            const std::unordered_map<std::int64_t, UserRow>& users,
                            const IngestFilter& filter) {
  DatasetBuilder builder(filter);
  for (const auto& post : posts) builder.add(post);
  return std::move(builder).finish(users);
}

DatasetResult ingest_posts(std::istream& posts_xml, const std::unordered_map<std::int64_t, UserRow>& users,
                           const IngestFilter& filter) {
  DatasetBuilder builder(filter);
  RowReader reader(posts_xml);
  AttributeMap row;
  while (reader.next(row)) builder.add(decode_post(row));
  return std::move(builder).finish(users);
}

std::unordered_map<std::int64_t, UserRow> read_users(std::istream& users_xml) {
  std::unordered_map<std::int64_t, UserRow> users;
  RowReader reader(users_xml);
  AttributeMap row;
  while (reader.next(row)) {
    auto user = decode_user(row);
    users.insert_or_assign(user.id, user);
  }
  return users;
}

std::string check_record(const QARecord& record, bool require_accepted) {
  const auto& q = record.question;
  if (q.post_type != PostType::kQuestion) return "question row is not a question";
  if (q.parent_id) return "question has a parent";
  if (record.answers.size() < 2) return "fewer than two answers";
  int accepted = 0;
  for (const auto& a : record.answers) {
    if (a.post.post_type != PostType::kAnswer) return "answer row is not an answer";
    if (!a.post.parent_id || *a.post.parent_id != q.id) return "answer parent mismatch";
    if (!a.post.tags.empty()) return "answer carries tags";
    if (!a.post.owner_user_id) return "answer without registered owner";
    if (q.owner_user_id && *a.post.owner_user_id == *q.owner_user_id) return "answer by question owner";
    if (a.answerer.id != *a.post.owner_user_id) return "answerer does not match owner";
    if (a.post.comment_count < 0) return "negative comment count";
    if (a.answerer.reputation < 0) return "negative reputation";
    accepted += a.accepted ? 1 : 0;
  }
  if (accepted > 1) return "more than one accepted answer";
  if (require_accepted && accepted != 1) return "no accepted answer";
  return {};
}

}  // namespace soaccept::ingest
