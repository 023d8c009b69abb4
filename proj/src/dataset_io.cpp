#include "soaccept/dataset_io.hpp"

#include <fstream>
#include <json.hpp>

namespace soaccept::ingest {

using nlohmann::json;

namespace {

json optional_value(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::int64_t> read_optional(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<std::int64_t>();
}

Timestamp read_ts(const json& j, const char* key) {
  const auto text = j.at(key).get<std::string>();
  auto ts = parse_timestamp(text);
  if (!ts) throw DataError(std::string("dataset: bad timestamp in '") + key + "': " + text);
  return *ts;
}

const char* type_name(PostType t) {
  switch (t) {
    case PostType::kQuestion:
      return "question";
    case PostType::kAnswer:
      return "answer";
    case PostType::kOther:
      break;
  }
  return "other";
}

PostType type_from(const std::string& s) {
  if (s == "question") return PostType::kQuestion;
  if (s == "answer") return PostType::kAnswer;
  if (s == "other") return PostType::kOther;
  throw DataError("dataset: unknown post_type '" + s + "'");
}

json post_to_json(const PostRow& p) {
  return json{{"id", p.id},
              {"post_type", type_name(p.post_type)},
              {"parent_id", optional_value(p.parent_id)},
              {"accepted_answer_id", optional_value(p.accepted_answer_id)},
              {"creation_ts", format_timestamp(p.creation_ts)},
              {"score", p.score},
              {"view_count", optional_value(p.view_count)},
              {"body", p.body},
              {"owner_user_id", optional_value(p.owner_user_id)},
              {"tags", p.tags},
              {"answer_count", optional_value(p.answer_count)},
              {"comment_count", p.comment_count}};
}

PostRow post_from_json(const json& j) {
  PostRow p;
  p.id = j.at("id").get<std::int64_t>();
  p.post_type = type_from(j.at("post_type").get<std::string>());
  p.parent_id = read_optional(j, "parent_id");
  p.accepted_answer_id = read_optional(j, "accepted_answer_id");
  p.creation_ts = read_ts(j, "creation_ts");
  p.score = j.at("score").get<std::int64_t>();
  p.view_count = read_optional(j, "view_count");
  p.body = j.at("body").get<std::string>();
  p.owner_user_id = read_optional(j, "owner_user_id");
  p.tags = j.at("tags").get<std::vector<std::string>>();
  p.answer_count = read_optional(j, "answer_count");
  p.comment_count = j.at("comment_count").get<std::int64_t>();
  return p;
}

}  // namespace

void write_dataset(std::ostream& out, const std::vector<QARecord>& records) {
  for (const auto& record : records) {
    json answers = json::array();
    for (const auto& a : record.answers) {
      json entry = post_to_json(a.post);
      entry["reputation"] = a.answerer.reputation;
      entry["user_creation_ts"] = format_timestamp(a.answerer.creation_ts);
      entry["accepted"] = a.accepted;
      answers.push_back(std::move(entry));
    }
    const json line{{"v", kDatasetSchemaVersion}, {"question", post_to_json(record.question)},
                    {"answers", std::move(answers)}};
    out << line.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

std::vector<QARecord> read_dataset(std::istream& in) {
  std::vector<QARecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const auto version = j.at("v").get<int>();
      if (version != kDatasetSchemaVersion)
        throw SchemaVersionError("dataset line " + std::to_string(line_no) + ": schema version " +
                                 std::to_string(version) + ", expected " +
                                 std::to_string(kDatasetSchemaVersion));
      QARecord record;
      record.question = post_from_json(j.at("question"));
      for (const auto& a : j.at("answers")) {
        AnswerEntry entry;
        entry.post = post_from_json(a);
        entry.answerer.id = entry.post.owner_user_id.value_or(0);
        entry.answerer.reputation = a.at("reputation").get<std::int64_t>();
        entry.answerer.creation_ts = read_ts(a, "user_creation_ts");
        entry.accepted = a.at("accepted").get<bool>();
        record.answers.push_back(std::move(entry));
      }
      records.push_back(std::move(record));
    } catch (const json::exception& e) {
      throw DataError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_dataset(const std::filesystem::path& path, const std::vector<QARecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_dataset(out, records);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<QARecord> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_dataset(in);
}

}  // namespace soaccept::ingest
