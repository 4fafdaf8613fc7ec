#include <doctest.h>

#include <random>

#include "iconsift/error.hpp"
#include "iconsift/matcher.hpp"

using namespace iconsift;
using namespace std::chrono_literals;

namespace {

const Vocabulary& dog_vocab() {
  static const Vocabulary v =
      Vocabulary::load_file(ICONSIFT_FIXTURE_DIR "/vocab_dog.jsonl", VocabFormat::jsonl);
  return v;
}

const Vocabulary& hunt_vocab() {
  static const Vocabulary v =
      Vocabulary::load_file(ICONSIFT_FIXTURE_DIR "/vocab_hunt.jsonl", VocabFormat::jsonl);
  return v;
}

const CodeSet kDogCodes = {"11H(CRISPIN & CRISPINIAN)69", "34B11", "43A3746",
                           "43C2181", "46E31", "73F215321"};

std::string stub(const char* name) { return std::string(ICONSIFT_FIXTURE_DIR "/bin/") + name; }

VocabEntry entry(const char* code, const char* text, LabelSet kws) {
  return {Notation::parse(code), text, std::move(kws)};
}

}  // namespace

TEST_CASE("normalize_labels") {
  CHECK(normalize_labels({"dog", "Dog", "dog"}, {}) == LabelSet{"dog"});
  CHECK(normalize_labels({"person", "horse"}, {{"person", "human being"}}) ==
        LabelSet{"human being", "horse"});
  CHECK(normalize_labels({" Person "}, {{"PERSON", "Human Being"}}) == LabelSet{"human being"});
  CHECK(normalize_labels({}, {}).empty());
  CHECK(normalize_labels({"  ", ""}, {}).empty());
}

TEST_CASE("map_keywords on the dog fixture") {
  const auto r = map_keywords({"dog"}, dog_vocab(), false);
  CHECK(r.codes == kDogCodes);
  CHECK(r.pass_used == MatchPass::exact);
  CHECK_FALSE(r.singleton_codes.has_value());
}

TEST_CASE("map_keywords relaxes to subset matching") {
  const auto r = map_keywords({"horse", "human being"}, hunt_vocab(), false);
  CHECK(r.codes == CodeSet{"46C13141(+78)"});
  CHECK(r.pass_used == MatchPass::subset);
}

TEST_CASE("singleton pass adds every code keyed by any label") {
  const auto base = map_keywords({"horse", "human being"}, hunt_vocab(), false);
  const auto r = map_keywords({"horse", "human being"}, hunt_vocab(), true);
  REQUIRE(r.singleton_codes.has_value());
  CHECK(r.codes.contains("25FF24(MUSK-DEER)(+78)"));
  CHECK(r.codes.contains("43CC114(+423)"));
  CHECK(r.codes.size() > base.codes.size());
  for (const auto& c : base.codes) CHECK(r.codes.contains(c));
  CHECK(r.singleton_codes->at("horse") == hunt_vocab().codes_with_keyword("horse"));
  CHECK(r.singleton_codes->at("human being") == hunt_vocab().codes_with_keyword("human being"));
  CHECK(r.pass_used == MatchPass::subset);
}

TEST_CASE("map_keywords edge cases") {
  CHECK_THROWS_AS(map_keywords({}, dog_vocab(), false), Error);
  const auto none = map_keywords({"unicorn"}, dog_vocab(), false);
  CHECK(none.codes.empty());
  CHECK(none.pass_used == MatchPass::none);
}

TEST_CASE("pass 2 never runs when pass 1 finds codes") {
  // {"dog"} by subset would also pick up 34B111 and 94L53.
  CHECK(dog_vocab().codes_with_keywords_superset({"dog"}) != kDogCodes);
  CHECK(map_keywords({"dog"}, dog_vocab(), false).codes == kDogCodes);
}

TEST_CASE("singleton never removes codes and results are deterministic") {
  std::vector<std::string> keywords;
  for (const auto& [kw, codes] : hunt_vocab().keyword_index()) keywords.push_back(kw);
  std::sort(keywords.begin(), keywords.end());
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    LabelSet labels;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 3); ++i) labels.insert(keywords[rng() % keywords.size()]);
    const auto off = map_keywords(labels, hunt_vocab(), false);
    const auto on = map_keywords(labels, hunt_vocab(), true);
    for (const auto& c : off.codes) CHECK(on.codes.contains(c));
    CHECK(map_keywords(labels, hunt_vocab(), true).codes == on.codes);
  }
}

TEST_CASE("map_descriptions") {
  CHECK(map_descriptions({"dog"}, dog_vocab()).contains("34B11"));
  CHECK(map_descriptions({"dye", "dog"}, dog_vocab()) == CodeSet{"94L53"});
  CHECK(map_descriptions({"qqq"}, dog_vocab()).empty());
  CHECK_THROWS_AS(map_descriptions({}, dog_vocab()), Error);
  const auto singles = map_descriptions({"dye", "cat"}, dog_vocab(), true);
  CHECK(singles.contains("94L53"));
  CHECK(singles.contains("34B12"));
}

TEST_CASE("reduce_intersection") {
  const auto keyword = map_keywords({"dog"}, dog_vocab(), false).codes;
  const auto description = map_descriptions({"dog"}, dog_vocab());
  // Computed over the fixture: description search finds texts with the word
  // "dog": 34B11, 46E31, 73F215321, 94L53, 34B111.
  CHECK(description == CodeSet{"34B11", "34B111", "46E31", "73F215321", "94L53"});
  CHECK(reduce_intersection(keyword, description) == CodeSet{"34B11", "46E31", "73F215321"});
  CHECK(reduce_intersection(keyword, keyword) == keyword);
  CHECK(reduce_intersection(keyword, {}).empty());
}

TEST_CASE("reduce_shortest_title") {
  CHECK(reduce_shortest_title(kDogCodes, {"dog"}, dog_vocab()) == CodeSet{"34B11"});
  CHECK(reduce_shortest_title({"46E31"}, {"dog"}, dog_vocab()) == CodeSet{"46E31"});

  SUBCASE("equal-length titles tie-break on notation") {
    const Vocabulary v({entry("34B13", "cat (b)", {"cat"}), entry("34B12", "cat (a)", {"cat"}),
                        entry("34B14", "a cat on a mat", {"cat"})});
    CHECK(reduce_shortest_title({"34B12", "34B13", "34B14"}, {"cat"}, v) == CodeSet{"34B12"});
  }
  SUBCASE("codes mentioning no label are dropped") {
    CHECK(reduce_shortest_title({"43A3746", "43C2181"}, {"dog"}, dog_vocab()).empty());
  }
  SUBCASE("one winner per label") {
    CHECK(reduce_shortest_title({"34B11", "46E31", "34B12"}, {"dog", "cat"}, dog_vocab()) ==
          CodeSet{"34B11", "34B12"});
  }
}

TEST_CASE("reduce_external") {
  std::vector<std::string> warnings;
  SUBCASE("echo selector is the identity") {
    CHECK(reduce_external(kDogCodes, {stub("select_all.sh"), 10s}, dog_vocab()) == kDogCodes);
  }
  SUBCASE("codes outside the candidate set are discarded") {
    CHECK(reduce_external(kDogCodes, {stub("select_stub.sh"), 10s}, dog_vocab(), &warnings) ==
          CodeSet{"34B11"});
    CHECK(warnings.size() == 1);
  }
  SUBCASE("failures") {
    for (const char* name : {"select_fail.sh", "select_garbage.sh"}) {
      CAPTURE(name);
      try {
        reduce_external(kDogCodes, {stub(name), 10s}, dog_vocab());
        FAIL("expected ExternalCommandFailure");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::external_command);
      }
    }
    CHECK_THROWS_AS(reduce_external(kDogCodes, {stub("select_slow.sh"), 300ms}, dog_vocab()), Error);
    CHECK_THROWS_AS(reduce_external(kDogCodes, {"", 1s}, dog_vocab()), Error);
  }
}
