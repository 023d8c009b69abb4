#include <doctest.h>
#include <expat.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "soaccept/dataset_io.hpp"
#include "soaccept/dump.hpp"
#include "soaccept/rng.hpp"
#include "soaccept/timestamp.hpp"
#include "soaccept/xml_rows.hpp"
#include "test_paths.hpp"

using namespace soaccept;
using namespace soaccept::ingest;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<AttributeMap> read_rows(const std::string& xml, std::size_t chunk = 64 * 1024) {
  std::istringstream in(xml);
  RowReader reader(in, chunk);
  std::vector<AttributeMap> rows;
  AttributeMap row;
  while (reader.next(row)) rows.push_back(row);
  return rows;
}

// Rows as seen by expat, with the byte offset just past each row element.
struct ExpatRows {
  std::vector<AttributeMap> rows;
  std::vector<std::uint64_t> ends;
  int depth = 0;
  XML_Parser parser = nullptr;
  bool ok = true;
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto* st = static_cast<ExpatRows*>(data);
  ++st->depth;
  if (st->depth != 2 || std::string_view(name) != "row") return;
  AttributeMap m;
  for (int i = 0; attrs[i]; i += 2) m[attrs[i]] = attrs[i + 1];
  st->rows.push_back(std::move(m));
  st->ends.push_back(static_cast<std::uint64_t>(XML_GetCurrentByteIndex(st->parser) +
                                                XML_GetCurrentByteCount(st->parser)));
}

void XMLCALL on_end(void* data, const XML_Char*) { --static_cast<ExpatRows*>(data)->depth; }

ExpatRows expat_rows(const std::string& xml) {
  ExpatRows st;
  st.parser = XML_ParserCreate("UTF-8");
  XML_SetUserData(st.parser, &st);
  XML_SetElementHandler(st.parser, on_start, on_end);
  st.ok = XML_Parse(st.parser, xml.data(), static_cast<int>(xml.size()), 1) == XML_STATUS_OK;
  XML_ParserFree(st.parser);
  return st;
}

AttributeMap attrs(std::initializer_list<std::pair<const std::string, std::string>> l) {
  AttributeMap m;
  for (const auto& [k, v] : l) m[k] = v;
  return m;
}

PostRow question(std::int64_t id, std::int64_t owner, std::optional<std::int64_t> accepted, int year = 2015,
                 std::vector<std::string> tags = {"java"}) {
  PostRow p;
  p.id = id;
  p.post_type = PostType::kQuestion;
  p.accepted_answer_id = accepted;
  p.creation_ts = *parse_timestamp(std::to_string(year) + "-03-01T10:00:00.000");
  p.owner_user_id = owner;
  p.tags = std::move(tags);
  p.body = "<p>q</p>";
  p.view_count = 10;
  return p;
}

PostRow answer(std::int64_t id, std::int64_t parent, std::optional<std::int64_t> owner) {
  PostRow p;
  p.id = id;
  p.post_type = PostType::kAnswer;
  p.parent_id = parent;
  p.creation_ts = *parse_timestamp("2015-03-01T11:00:00.000");
  p.owner_user_id = owner;
  p.body = "<p>a</p>";
  return p;
}

std::unordered_map<std::int64_t, UserRow> users_up_to(std::int64_t n) {
  std::unordered_map<std::int64_t, UserRow> users;
  for (std::int64_t i = 1; i <= n; ++i) users[i] = UserRow{i, 10 * i, *parse_timestamp("2012-01-01T00:00:00")};
  return users;
}

IngestFilter java_filter() {
  IngestFilter f;
  f.tags_any_of = {"java", "javascript"};
  return f;
}

}  // namespace

TEST_CASE("row reader: single row and empty document") {
  const auto rows = read_rows(R"(<rows><row Id="1" Score="3"/></rows>)");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == attrs({{"Id", "1"}, {"Score", "3"}}));
  CHECK(read_rows("<rows></rows>").empty());
  CHECK(read_rows("<?xml version=\"1.0\"?>\n<rows/>\n").empty());
}

TEST_CASE("row reader: entities, comments and non-row elements") {
  const auto rows = read_rows(
      "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<!-- dump -->\n<posts>\n"
      "  <meta x=\"1\"/>\n  <row Body=\"&lt;p&gt;a &amp; b&#xA;&#39;c&#x27;&quot;\" Id='2'/>\n</posts>\n");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("Body") == "<p>a & b\n'c'\"");
  CHECK(rows[0].at("Id") == "2");
}

TEST_CASE("row reader agrees with expat on the fixture at every chunk size") {
  const auto xml = slurp(test::fixture_dir() / "Posts.xml");
  const auto oracle = expat_rows(xml);
  REQUIRE(oracle.ok);
  for (std::size_t chunk : {std::size_t{7}, std::size_t{4096}, std::size_t{1} << 20}) {
    const auto rows = read_rows(xml, chunk);
    CHECK(rows == oracle.rows);
  }
}

TEST_CASE("truncated documents fail with the offset of the last complete row") {
  const auto xml = slurp(test::fixture_dir() / "Users.xml");
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto cut = 60 + rng.uniform_index(xml.size() - 70);
    const auto part = xml.substr(0, cut);
    const auto oracle = expat_rows(part);
    REQUIRE_FALSE(oracle.ok);
    std::uint64_t expected = 0;
    for (auto e : oracle.ends)
      if (e <= cut) expected = std::max(expected, e);
    try {
      read_rows(part, 512);
      FAIL("truncated document accepted at cut " << cut);
    } catch (const XmlError& e) {
      CHECK(e.last_row_end() == expected);
      CHECK(e.offset() >= e.last_row_end());
    }
  }
}

TEST_CASE("malformed XML is rejected like expat rejects it") {
  for (const std::string bad : {"<rows><row Id=\"1\"></rows>", "<rows><row Id=1/></rows>", "<rows><row Id=\"1\"/>",
                                "<rows><row Id=\"&bogus;\"/></rows>", "<rows><row Id=\"1\" Id=\"2\"/></rows>"}) {
    CHECK_FALSE(expat_rows(bad).ok);
    CHECK_THROWS_AS(read_rows(bad), XmlError);
  }
}

TEST_CASE("decode_post maps attributes") {
  const auto q = decode_post(attrs({{"Id", "5"}, {"PostTypeId", "1"}, {"CreationDate", "2014-03-01T10:00:00.000"},
                                    {"Tags", "<java><Arrays>"}}));
  CHECK(q.post_type == PostType::kQuestion);
  CHECK(q.tags == std::vector<std::string>{"java", "arrays"});
  CHECK_FALSE(q.view_count.has_value());
  CHECK(q.comment_count == 0);

  const auto a = decode_post(attrs({{"Id", "6"}, {"PostTypeId", "2"}, {"ParentId", "5"},
                                    {"CreationDate", "2014-03-01T10:00:00.123"}, {"Score", "-2"}}));
  CHECK(a.post_type == PostType::kAnswer);
  CHECK(a.parent_id == 5);
  CHECK(a.score == -2);
  CHECK(format_timestamp(a.creation_ts) == "2014-03-01T10:00:00.123Z");

  const auto other = decode_post(attrs({{"Id", "8"}, {"PostTypeId", "4"}, {"CreationDate", "2014-03-01T10:00:00"}}));
  CHECK(other.post_type == PostType::kOther);
  CHECK(parse_tags("|java|spring|") == std::vector<std::string>{"java", "spring"});
}

TEST_CASE("decode errors name the attribute") {
  auto attribute_of = [](const AttributeMap& m, bool user) {
    try {
      if (user) {
        decode_user(m);
      } else {
        decode_post(m);
      }
    } catch (const DecodeError& e) {
      return e.attribute();
    }
    return std::string("<none>");
  };
  CHECK(attribute_of(attrs({{"Id", "7"}, {"PostTypeId", "1"}}), false) == "CreationDate");
  CHECK(attribute_of(attrs({{"Id", "x"}, {"PostTypeId", "1"}, {"CreationDate", "2014-01-01T00:00:00"}}), false) ==
        "Id");
  CHECK(attribute_of(attrs({{"Id", "7"}, {"PostTypeId", "2"}, {"CreationDate", "2014-01-01T00:00:00"}}), false) ==
        "ParentId");
  CHECK(attribute_of(attrs({{"Id", "7"}, {"PostTypeId", "1"}, {"CreationDate", "2014-13-01T00:00:00"}}), false) ==
        "CreationDate");
  CHECK(attribute_of(attrs({{"Reputation", "10"}}), true) == "Id");
  CHECK(attribute_of(attrs({{"Id", "9"}, {"Reputation", "-1"}, {"CreationDate", "2012-01-01T00:00:00.000"}}), true) ==
        "Reputation");
  const auto u = decode_user(attrs({{"Id", "9"}, {"Reputation", "1500"}, {"CreationDate", "2012-01-01T00:00:00.000"}}));
  CHECK(u.id == 9);
  CHECK(u.reputation == 1500);
}

TEST_CASE("timestamps") {
  CHECK(parse_timestamp("2016-02-29T23:59:59.999").has_value());
  CHECK_FALSE(parse_timestamp("2015-02-29T00:00:00").has_value());
  CHECK_FALSE(parse_timestamp("2015-01-01 00:00:00").has_value());
  CHECK(format_timestamp(*parse_timestamp("2015-01-01T00:00:00.1234Z")) == "2015-01-01T00:00:00.123Z");
  CHECK(millis_between(*parse_timestamp("2015-01-01T00:00:00"), *parse_timestamp("2015-01-01T00:00:01.500")) == 1500);
}

TEST_CASE("build_dataset applies the sampling rules") {
  const auto users = users_up_to(20);
  std::vector<PostRow> posts{
      // kept: three answers, one accepted
      question(1, 1, 11), answer(11, 1, 2), answer(12, 1, 3), answer(13, 1, 4),
      // accepted answer self-authored
      question(2, 5, 21), answer(21, 2, 5), answer(22, 2, 6), answer(23, 2, 7),
      // unregistered answerer leaves one answer
      question(3, 8, 31), answer(31, 3, 9), answer(32, 3, std::nullopt),
      // tag and year filters
      question(4, 1, 41, 2015, {"python"}), answer(41, 4, 2), answer(42, 4, 3),
      question(5, 1, 51, 2013), answer(51, 5, 2), answer(52, 5, 3),
      // no accepted answer
      question(6, 1, std::nullopt), answer(61, 6, 2), answer(62, 6, 3),
      // unknown user
      question(7, 1, 71), answer(71, 7, 2), answer(72, 7, 99),
  };
  const auto result = build_dataset(posts, users, java_filter());
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].question.id == 1);
  CHECK(result.records[0].answers.size() == 3);
  CHECK(result.records[0].answers[0].accepted);
  CHECK(check_record(result.records[0]).empty());
  const auto& r = result.report;
  CHECK(r.get("answer_self_authored") == 1);
  CHECK(r.get("question_accepted_answer_discarded") == 1);
  CHECK(r.get("answer_unregistered_owner") == 1);
  CHECK(r.get("question_too_few_answers") == 2);
  CHECK(r.get("question_tag_mismatch") == 1);
  CHECK(r.get("question_year_out_of_range") == 1);
  CHECK(r.get("question_no_accepted_answer") == 1);
  CHECK(r.get("answer_unknown_user") == 1);

  auto relaxed = java_filter();
  relaxed.require_accepted = false;
  const auto kept = build_dataset(posts, users, relaxed);
  CHECK(kept.records.size() == 2);
  for (const auto& rec : kept.records) CHECK(check_record(rec, false).empty());
}

TEST_CASE("build_dataset output does not depend on post order") {
  const auto xml = slurp(test::fixture_dir() / "Posts.xml");
  std::vector<PostRow> posts;
  {
    std::istringstream in(xml);
    RowReader reader(in);
    AttributeMap row;
    while (reader.next(row)) posts.push_back(decode_post(row));
  }
  std::ifstream users_in(test::fixture_dir() / "Users.xml", std::ios::binary);
  const auto users = read_users(users_in);
  const auto base = build_dataset(posts, users, java_filter());
  REQUIRE(base.records.size() >= 200);
  for (const auto& rec : base.records) CHECK(check_record(rec).empty());

  Rng rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    auto shuffled = posts;
    rng.shuffle(std::span<PostRow>(shuffled));
    const auto other = build_dataset(shuffled, users, java_filter());
    CHECK(other.records == base.records);
    CHECK(other.report.counts == base.report.counts);
  }

  std::size_t accepted = 0, total = 0;
  for (const auto& rec : base.records)
    for (const auto& a : rec.answers) {
      accepted += a.accepted ? 1 : 0;
      ++total;
    }
  CHECK(static_cast<double>(accepted) / static_cast<double>(total) < 0.5);
}

TEST_CASE("dataset round trip and version check") {
  std::ifstream posts_in(test::fixture_dir() / "Posts.xml", std::ios::binary);
  std::ifstream users_in(test::fixture_dir() / "Users.xml", std::ios::binary);
  const auto users = read_users(users_in);
  const auto result = ingest_posts(posts_in, users, java_filter());

  std::ostringstream first, second;
  write_dataset(first, result.records);
  std::istringstream in(first.str());
  const auto back = read_dataset(in);
  CHECK(back == result.records);
  write_dataset(second, back);
  CHECK(first.str() == second.str());

  std::ostringstream empty;
  write_dataset(empty, {});
  CHECK(empty.str().empty());
  std::istringstream empty_in(empty.str());
  CHECK(read_dataset(empty_in).empty());

  auto line = first.str().substr(0, first.str().find('\n'));
  const auto pos = line.find("\"v\":1");
  REQUIRE(pos != std::string::npos);
  line.replace(pos, 5, "\"v\":2");
  std::istringstream bad(line + "\n");
  CHECK_THROWS_AS(read_dataset(bad), SchemaVersionError);
}
