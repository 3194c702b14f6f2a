#include <atomic>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "error.hpp"
#include "evaluator.hpp"
#include "httplib.h"
#include "json.hpp"
#include "ner.hpp"
#include "pipeline.hpp"
#include "support.hpp"

namespace eae {
namespace {

using testing::FixturePath;

Corpus Mini() {
  return LoadCorpusFile(FixturePath("mini.jsonl"), CorpusFormat::kJsonLines);
}

std::vector<std::tuple<std::string, std::string, Relation>> Ids(
    const std::vector<Candidate>& cs) {
  std::vector<std::tuple<std::string, std::string, Relation>> out;
  for (const auto& c : cs) out.emplace_back(c.event->id, c.entity->id, c.relation);
  std::sort(out.begin(), out.end());
  return out;
}

// Deterministic pseudo-scores from the query identity.
class HashScorer final : public nli::EntailmentScorer {
 public:
  std::vector<double> Score(
      std::span<const nli::PairQuery> queries) const override {
    std::vector<double> out;
    for (const auto& q : queries) {
      const auto h = std::hash<std::string>{}(q.event_id + "|" + q.entity_id);
      out.push_back(static_cast<double>(h % 1000) / 1000.0);
    }
    return out;
  }
};

class RecordingScorer final : public nli::EntailmentScorer {
 public:
  std::vector<double> Score(
      std::span<const nli::PairQuery> queries) const override {
    seen.insert(seen.end(), queries.begin(), queries.end());
    return std::vector<double>(queries.size(), 1.0);
  }
  mutable std::vector<nli::PairQuery> seen;
};

TEST_SUITE("pipeline") {

TEST_CASE("candidate pairs by example") {
  AnnotatedSentence s;
  s.entities = {{"ev", "", "", 0, 1, "EVENT"},
                {"g", "", "", 2, 3, "GPE"},
                {"d", "", "", 4, 5, "DATE"},
                {"m", "", "", 6, 7, "MONEY"}};
  CHECK(CandidatePairs(s).size() == 2);

  AnnotatedSentence two;
  two.entities = {{"e1", "", "", 0, 1, "EVENT"},
                  {"e2", "", "", 2, 3, "EVENT"},
                  {"g", "", "", 4, 5, "GPE"}};
  const auto c = CandidatePairs(two);
  CHECK(c.size() == 2);
  for (const auto& x : c) CHECK(x.entity->id == "g");

  AnnotatedSentence none;
  none.entities = {{"g", "", "", 0, 1, "GPE"}};
  CHECK(CandidatePairs(none).empty());
}

TEST_CASE("candidate pairs equal brute force on every fixture") {
  const Corpus mini = Mini();
  for (const auto& s : mini.sentences()) {
    CHECK(Ids(CandidatePairs(s)) == testing::BruteForceCandidates(s));
  }
  for (std::uint64_t seed = 30; seed < 35; ++seed) {
    const Corpus c = testing::SyntheticCorpus(seed, 20);
    for (const auto& s : c.sentences()) {
      CHECK(Ids(CandidatePairs(s)) == testing::BruteForceCandidates(s));
    }
  }
}

TEST_CASE("oracle extraction reproduces the gold graph") {
  const Corpus c = Mini();
  OracleScorer oracle(c.sentences());
  GoldNerProvider gold(c);
  const auto reg = TemplateRegistry::Default();
  const auto r = ExtractCorpus(c, gold, oracle, reg);
  CHECK(r.failures.empty());
  CHECK(r.graphs.size() == 7);  // s04 has no event
  for (const auto& g : r.graphs) {
    const auto* s = c.FindSentence(g.sentence_id);
    std::vector<RelationTriple> edges;
    for (const auto& e : g.edges) edges.push_back(e.triple());
    auto expected = s->relations;
    std::sort(expected.begin(), expected.end());
    CHECK(edges == expected);
    CHECK(g.nodes == s->entities);
  }
  const auto m = EvaluateEae(r.graphs, c.sentences());
  CHECK(*m.precision == 1.0);
  CHECK(*m.recall == 1.0);
  CHECK(*m.f1 == 1.0);
}

TEST_CASE("the forum meeting links to its three arguments") {
  const Corpus c = Mini();
  const auto* s = c.FindSentence("s02");
  OracleScorer oracle(c.sentences());
  const auto g = ExtractArguments(*s, oracle, TemplateRegistry::Default());
  REQUIRE(g.edges.size() == 3);
  std::set<Relation> rels;
  for (const auto& e : g.edges) {
    rels.insert(e.relation);
    CHECK(e.event_id == "s02:e1");
  }
  CHECK(rels.size() == 3);
}

TEST_CASE("unreachable threshold keeps nothing") {
  const Corpus c = Mini();
  OracleScorer oracle(c.sentences());
  const auto g = ExtractArguments(*c.FindSentence("s01"), oracle,
                                  TemplateRegistry::Default(), {1.01, 64});
  CHECK(g.edges.empty());
}

TEST_CASE("lowering the threshold never removes edges") {
  const Corpus c = testing::SyntheticCorpus(40, 30);
  HashScorer scorer;
  const auto reg = TemplateRegistry::Default();
  for (const auto& s : c.sentences()) {
    std::size_t previous = 0;
    std::set<RelationTriple> kept;
    for (double t : {0.9, 0.7, 0.5, 0.3, 0.1, 0.0}) {
      const auto g = ExtractArguments(s, scorer, reg, {t, 4});
      CHECK(g.edges.size() >= previous);
      std::set<RelationTriple> now;
      for (const auto& e : g.edges) {
        CHECK(e.confidence >= t);
        now.insert(e.triple());
      }
      CHECK(std::includes(now.begin(), now.end(), kept.begin(), kept.end()));
      kept = now;
      previous = g.edges.size();
    }
    CHECK(previous == CandidatePairs(s).size());
  }
}

TEST_CASE("one test-template query per candidate") {
  const Corpus c = Mini();
  const auto reg = TemplateRegistry::Default();
  for (const auto& s : c.sentences()) {
    RecordingScorer rec;
    const auto g = ExtractArguments(s, rec, reg, {0.5, 2});
    const auto cands = CandidatePairs(s);
    REQUIRE(rec.seen.size() == cands.size());
    CHECK(g.edges.size() == cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const auto& q = rec.seen[i];
      const auto t = reg.For(cands[i].relation, Phase::kTest)[0];
      CHECK(q.hypothesis == Instantiate(t, *cands[i].event, *cands[i].entity).text);
      CHECK(q.premise == s.text);
      CHECK(q.event_id == cands[i].event->id);
    }
    // Edges are sorted and refer to nodes of the graph.
    for (std::size_t i = 1; i < g.edges.size(); ++i) {
      CHECK(g.edges[i - 1].triple() < g.edges[i].triple());
    }
    for (const auto& e : g.edges) {
      CHECK(s.FindEntity(e.event_id) != nullptr);
      CHECK(IsCompatible(e.relation, s.FindEntity(e.argument_id)->type));
    }
  }
}

TEST_CASE("sentence splitting") {
  CHECK(SplitSentences("").empty());
  CHECK(SplitSentences("  \n ").empty());
  const auto parts = SplitSentences("وقع انفجار. هل من ضحايا؟ لا\nسطر آخر!! ");
  REQUIRE(parts.size() == 4);
  CHECK(parts[0] == "وقع انفجار.");
  CHECK(parts[1] == "هل من ضحايا؟");
  CHECK(parts[2] == "لا");
  CHECK(parts[3] == "سطر آخر!!");
}

TEST_CASE("mock provider returns exactly the script") {
  std::map<std::string, std::vector<EntityMention>, std::less<>> script;
  script["وقع انفجار في حلب"] = {{"", "", "", 4, 10, "EVENT"},
                                  {"", "", "", 14, 17, "GPE"}};
  MockNerProvider mock(script);
  const auto s = RecognizeEntities("وقع  انفجار في حلب", "x", mock);
  REQUIRE(s.entities.size() == 2);
  CHECK(s.entities[0].id == "x:T1");
  CHECK(s.entities[0].surface == "انفجار");
  CHECK(s.entities[1].surface == "حلب");
  CHECK(s.relations.empty());
  CHECK(RecognizeEntities("نص آخر", "y", mock).entities.empty());
}

TEST_CASE("invalid provider mentions are a protocol error") {
  std::map<std::string, std::vector<EntityMention>, std::less<>> script;
  script["قصير"] = {{"", "", "", 0, 40, "GPE"}};
  MockNerProvider mock(script);
  try {
    RecognizeEntities("قصير", "z", mock);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kProtocol);
  }
}

TEST_CASE("documents: one graph per event sentence, failures isolated") {
  const std::string doc =
      "وقع انفجار في حلب. زار الرئيس عمان.\nجملة معطوبة.";
  std::map<std::string, std::vector<EntityMention>, std::less<>> script;
  script["وقع انفجار في حلب."] = {{"", "", "", 4, 10, "EVENT"},
                                   {"", "", "", 14, 17, "GPE"}};
  script["زار الرئيس عمان."] = {{"", "", "", 4, 10, "OCC"}};
  script["جملة معطوبة."] = {{"", "", "", 0, 99, "PERS"}};
  MockNerProvider mock(script);
  HashScorer scorer;
  const auto reg = TemplateRegistry::Default();

  const auto r = ProcessDocument(doc, "d", mock, scorer, reg, {0.0, 8});
  REQUIRE(r.graphs.size() == 1);
  CHECK(r.graphs[0].sentence_id == "d:1");
  CHECK(r.graphs[0].edges.size() == 1);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].sentence_id == "d:3");

  const auto again = ProcessDocument(doc, "d", mock, scorer, reg, {0.0, 8});
  CHECK(again.graphs == r.graphs);
  CHECK(ProcessDocument("", "d", mock, scorer, reg).graphs.empty());
}

TEST_CASE("graph records round-trip") {
  const Corpus c = Mini();
  OracleScorer oracle(c.sentences());
  GoldNerProvider gold(c);
  const auto r = ExtractCorpus(c, gold, oracle, TemplateRegistry::Default());
  std::stringstream buf;
  WriteGraphs(r.graphs, buf);
  CHECK(ReadGraphs(buf, "g.jsonl") == r.graphs);
  std::istringstream bad("{\"sentence_id\": 3}\n");
  CHECK_THROWS_AS(ReadGraphs(bad, "g.jsonl"), ParseError);
}

// Local stand-in for the annotation service.
class FakeService {
 public:
  FakeService() {
    server_.Post("/ner", [this](const httplib::Request& req,
                                httplib::Response& res) {
      ++calls;
      last_auth = req.get_header_value("Authorization");
      if (failures_left > 0) {
        --failures_left;
        res.status = 503;
        return;
      }
      if (mode == "garbage") {
        res.set_content("<html>", "text/html");
        return;
      }
      if (mode == "reject") {
        res.status = 400;
        return;
      }
      const auto body = nlohmann::json::parse(req.body);
      const std::string text = body.at("text");
      nlohmann::json ents = nlohmann::json::array();
      if (text == "وقع انفجار في حلب") {
        ents.push_back({{"type", "EVENT"}, {"start", 4}, {"end", 10}});
        ents.push_back({{"type", "GPE"}, {"start", 14}, {"end", 17}, {"id", "g"}});
      }
      res.set_content(nlohmann::json{{"entities", ents}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeService() {
    server_.stop();
    thread_.join();
  }

  RemoteNerConfig Config() const {
    RemoteNerConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/ner";
    c.token = "secret";
    c.timeout = std::chrono::milliseconds(2000);
    c.backoff = std::chrono::milliseconds(1);
    return c;
  }

  std::atomic<int> calls{0};
  std::atomic<int> failures_left{0};
  std::string mode;
  std::string last_auth;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST_CASE("remote provider") {
  FakeService service;

  SUBCASE("typed spans with bearer auth") {
    RemoteNerProvider p(service.Config());
    const auto s = RecognizeEntities("وقع انفجار في حلب", "r", p);
    REQUIRE(s.entities.size() == 2);
    CHECK(s.entities[0].surface == "انفجار");
    CHECK(s.entities[1].id == "g");
    CHECK(service.last_auth == "Bearer secret");
  }
  SUBCASE("transient failures are retried") {
    service.failures_left = 2;
    RemoteNerProvider p(service.Config());
    CHECK(p.Recognize("وقع انفجار في حلب", "").size() == 2);
    CHECK(service.calls == 3);
  }
  SUBCASE("bounded retries end in a transport error") {
    service.failures_left = 100;
    RemoteNerProvider p(service.Config());
    try {
      p.Recognize("x", "");
      FAIL("expected Error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kTransport);
    }
    CHECK(service.calls == 3);
  }
  SUBCASE("malformed body is a protocol error") {
    service.mode = "garbage";
    RemoteNerProvider p(service.Config());
    try {
      p.Recognize("x", "");
      FAIL("expected Error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kProtocol);
    }
  }
  SUBCASE("client errors are not retried") {
    service.mode = "reject";
    RemoteNerProvider p(service.Config());
    CHECK_THROWS_AS(p.Recognize("x", ""), Error);
    CHECK(service.calls == 1);
  }
}

TEST_CASE("unreachable service") {
  RemoteNerConfig c;
  c.endpoint = "http://127.0.0.1:1/ner";
  c.backoff = std::chrono::milliseconds(1);
  c.timeout = std::chrono::milliseconds(500);
  RemoteNerProvider p(c);
  try {
    p.Recognize("x", "");
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTransport);
  }
  RemoteNerConfig empty;
  CHECK_THROWS_AS(RemoteNerProvider{empty}, Error);
}

TEST_CASE("provider response parsing") {
  CHECK(ParseNerResponse(R"({"entities": []})").empty());
  CHECK_THROWS_AS(ParseNerResponse(R"({"entities": [{"type": "GPE"}]})"), Error);
  CHECK_THROWS_AS(ParseNerResponse("[]"), Error);
}

}  // TEST_SUITE

}  // namespace
}  // namespace eae
