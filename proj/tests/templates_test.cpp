#include "corpus.hpp"
#include "doctest.h"
#include "error.hpp"
#include "templates.hpp"

namespace eae {
namespace {

const EntityMention kSiege{"e", "s", "الحصار الشامل على قطاع غزة", 0, 26, "EVENT"};

TEST_SUITE("templates") {

TEST_CASE("default registry shape") {
  const auto reg = TemplateRegistry::Default();
  CHECK(reg.all().size() == 12);
  for (Relation r : kAllRelations) {
    CHECK(reg.For(r, Phase::kTrain).size() == 4);
    const auto test = reg.For(r, Phase::kTest);
    REQUIRE(test.size() == 1);
    CHECK(test[0].index == "t2");
    CHECK_FALSE(test[0].reconstructed);
  }
}

TEST_CASE("test-phase hypotheses for the siege example") {
  const auto reg = TemplateRegistry::Default();
  const EntityMention date{"d", "s", "9 أكتوبر 2023", 0, 13, "DATE"};
  const EntityMention agent{"a", "s", "وزير الدفاع الإسرائيلي", 0, 22, "OCC"};
  const EntityMention place{"g", "s", "قطاع غزة", 0, 8, "GPE"};

  const auto h = Instantiate(reg.For(Relation::kHasDate, Phase::kTest)[0],
                             kSiege, date);
  CHECK(h.text == "9 أكتوبر 2023 تاريخ حدوث الحصار الشامل على قطاع غزة");
  CHECK(h.template_id == "hasDate/t2");
  CHECK(h.event_id == "e");
  CHECK(h.entity_id == "d");

  CHECK(Instantiate(reg.For(Relation::kHasAgent, Phase::kTest)[0], kSiege, agent)
            .text ==
        "وزير الدفاع الإسرائيلي أحد الفاعلين في الحصار الشامل على قطاع غزة");
  CHECK(Instantiate(reg.For(Relation::kHasLocation, Phase::kTest)[0], kSiege,
                    place)
            .text == "قطاع غزة مكان حدوث الحصار الشامل على قطاع غزة");
}

TEST_CASE("instantiation checks mention types") {
  const auto t = TemplateRegistry::Default().For(Relation::kHasDate,
                                                 Phase::kTest)[0];
  const EntityMention gpe{"g", "s", "غزة", 0, 3, "GPE"};
  CHECK_THROWS_AS(Instantiate(t, kSiege, gpe), Error);
  CHECK_THROWS_AS(Instantiate(t, gpe, gpe), Error);
}

TEST_CASE("substitution is single pass") {
  CHECK(FillPattern("{entity} x {event}", "{entity}", "E") == "E x {entity}");
  CHECK_THROWS_AS(FillPattern("{event} only", "a", "b"), Error);
  CHECK_THROWS_AS(FillPattern("{event} {event} {entity}", "a", "b"), Error);
}

TEST_CASE("selecting another test template") {
  const auto reg = TemplateRegistry::Default().WithTestTemplate("t3");
  for (Relation r : kAllRelations) {
    const auto test = reg.For(r, Phase::kTest);
    REQUIRE(test.size() == 1);
    CHECK(test[0].index == "t3");
    CHECK(reg.For(r, Phase::kTrain).size() == 4);
  }
  CHECK_THROWS_AS(TemplateRegistry::Default().WithTestTemplate("t9"), Error);
}

TEST_CASE("registry validation") {
  // hasDate lacks a test template.
  const char* missing_test = R"({"templates": [
    {"relation": "hasAgent", "index": "t1", "phase": "both", "pattern": "{entity} a {event}"},
    {"relation": "hasLocation", "index": "t1", "phase": "both", "pattern": "{entity} l {event}"},
    {"relation": "hasDate", "index": "t1", "phase": "train", "pattern": "{entity} d {event}"}]})";
  CHECK_THROWS_AS(TemplateRegistry::FromJson(missing_test, "t.json"), Error);

  const char* bad_marker = R"({"templates": [
    {"relation": "hasAgent", "index": "t1", "phase": "both", "pattern": "{entity} a"},
    {"relation": "hasLocation", "index": "t1", "phase": "both", "pattern": "{entity} l {event}"},
    {"relation": "hasDate", "index": "t1", "phase": "both", "pattern": "{entity} d {event}"}]})";
  CHECK_THROWS_AS(TemplateRegistry::FromJson(bad_marker, "t.json"), Error);

  const char* ok = R"({"templates": [
    {"relation": "hasAgent", "index": "t1", "phase": "both", "pattern": "{entity} a {event}"},
    {"relation": "hasLocation", "index": "t1", "phase": "both", "pattern": "{entity} l {event}"},
    {"relation": "hasDate", "index": "t1", "phase": "both", "pattern": "{entity} d {event}"}]})";
  const auto reg = TemplateRegistry::FromJson(ok, "t.json");
  CHECK(reg.Find("hasDate/t1") != nullptr);
  CHECK_THROWS_AS(TemplateRegistry::FromJson("{", "t.json"), ParseError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace eae
