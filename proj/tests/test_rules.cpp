#include <doctest.h>

#include <random>
#include <sstream>

#include "iconsift/error.hpp"
#include "iconsift/rules.hpp"

using namespace iconsift;

namespace {

RuleSet parse(const std::string& text) {
  std::istringstream in(text);
  return RuleSet::load(in);
}

ErrorKind error_kind(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error for " << text);
  return ErrorKind::io;
}

Rule rule(std::string id, LabelSet labels, CodeSet codes, CodeSet then) {
  return {std::move(id), std::move(labels), std::move(codes), std::move(then), ""};
}

}  // namespace

TEST_CASE("load_rules") {
  const auto hunting = parse(R"([{"id":"hunt","if_labels":["Deer","dog","horse","person"],
                                  "then_codes":["43C1"],"note":"hunting scene"}])");
  REQUIRE(hunting.size() == 1);
  CHECK(hunting.rules()[0].if_labels == LabelSet{"deer", "dog", "horse", "person"});
  CHECK(hunting.rules()[0].then_codes == CodeSet{"43C1"});
  CHECK(hunting.rules()[0].note == "hunting scene");

  CHECK(parse("[]").empty());
  CHECK(RuleSet::load_file(ICONSIFT_FIXTURE_DIR "/rules.json").size() == 1);
}

TEST_CASE("load_rules rejects malformed rule files") {
  CHECK(error_kind(R"([{"id":"x","then_codes":["43C1"]}])") == ErrorKind::rule_format);
  CHECK(error_kind(R"([{"id":"x","if_labels":[],"if_codes":[],"then_codes":["43C1"]}])") ==
        ErrorKind::rule_format);
  CHECK(error_kind(R"([{"id":"x","if_labels":["dog"],"then_codes":["((("]}])") == ErrorKind::rule_format);
  CHECK(error_kind(R"([{"id":"x","if_codes":["B1"],"then_codes":["43C1"]}])") == ErrorKind::rule_format);
  CHECK(error_kind(R"([{"id":"x","if_labels":["dog"],"then_codes":[]}])") == ErrorKind::rule_format);
  CHECK(error_kind(R"([{"if_labels":["dog"],"then_codes":["43C1"]}])") == ErrorKind::rule_format);
  CHECK(error_kind(R"([{"id":"x","if_labels":["dog"]}])") == ErrorKind::rule_format);
  CHECK(error_kind(R"([{"id":"x","if_labels":["dog"],"then_codes":["43C1"]},
                       {"id":"x","if_labels":["cat"],"then_codes":["43C1"]}])") == ErrorKind::rule_format);
  CHECK(error_kind(R"({"id":"x"})") == ErrorKind::rule_format);
  CHECK(error_kind("[") == ErrorKind::rule_format);
}

TEST_CASE("infer fires on matching labels") {
  const RuleSet rs({rule("hunt", {"deer", "dog", "horse", "person"}, {}, {"43C1"})});
  CHECK(infer({}, {"deer", "dog", "horse", "person"}, rs) == CodeSet{"43C1"});
  CHECK(infer({}, {"deer", "dog", "horse"}, rs).empty());
  CHECK(infer({"34B11"}, {"cat"}, RuleSet{}) == CodeSet{"34B11"});
}

TEST_CASE("infer chains to a fixpoint") {
  const RuleSet rs({rule("r2", {}, {"2B"}, {"3C"}), rule("r1", {}, {"1A"}, {"2B"})});
  const auto trace = infer_traced({"1A"}, {}, rs);
  CHECK(trace.codes == CodeSet{"1A", "2B", "3C"});
  CHECK(trace.fired == std::vector<std::string>{"r1", "r2"});
  CHECK(trace.productive_rounds == 2);
}

TEST_CASE("antecedent codes match exactly, not hierarchically") {
  const RuleSet rs({rule("r", {}, {"34B11"}, {"43C1"})});
  CHECK(infer({"34B1"}, {}, rs) == CodeSet{"34B1"});
  CHECK(infer({"34B111"}, {}, rs) == CodeSet{"34B111"});
}

TEST_CASE("inference properties on random rule sets") {
  std::mt19937 rng(99);
  const std::vector<std::string> pool = {"1A", "1B", "1C", "2A", "2B", "2C", "3A", "3B", "3C", "4A"};
  const std::vector<std::string> labels = {"dog", "cat", "horse", "deer"};
  auto pick_codes = [&](int max) {
    CodeSet s;
    for (int i = 0, n = static_cast<int>(rng() % (max + 1)); i < n; ++i) s.insert(pool[rng() % pool.size()]);
    return s;
  };
  auto pick_labels = [&](int max) {
    LabelSet s;
    for (int i = 0, n = static_cast<int>(rng() % (max + 1)); i < n; ++i) s.insert(labels[rng() % labels.size()]);
    return s;
  };
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Rule> rules;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 8); i < n; ++i) {
      Rule r = rule("r" + std::to_string(i), pick_labels(2), pick_codes(2), pick_codes(2));
      if (r.if_labels.empty() && r.if_codes.empty()) r.if_codes.insert(pool[rng() % pool.size()]);
      if (r.then_codes.empty()) r.then_codes.insert(pool[rng() % pool.size()]);
      rules.push_back(std::move(r));
    }
    const RuleSet rs(rules);
    const CodeSet codes = pick_codes(3);
    const LabelSet ls = pick_labels(3);
    const auto trace = infer_traced(codes, ls, rs);

    for (const auto& c : codes) CHECK(trace.codes.contains(c));       // extensive
    CHECK(infer(trace.codes, ls, rs) == trace.codes);                  // idempotent
    CHECK(trace.productive_rounds <= rs.size());
    CodeSet then_all;
    for (const auto& r : rules) then_all.insert(r.then_codes.begin(), r.then_codes.end());
    CHECK(trace.productive_rounds <= then_all.size());

    // Adding a label or a rule never shrinks the output.
    LabelSet more_labels = ls;
    more_labels.insert(labels[rng() % labels.size()]);
    for (const auto& c : trace.codes) CHECK(infer(codes, more_labels, rs).contains(c));
    auto more_rules = rules;
    more_rules.push_back(rule("extra", pick_labels(1), {pool[rng() % pool.size()]}, {pool[rng() % pool.size()]}));
    for (const auto& c : trace.codes) CHECK(infer(codes, ls, RuleSet(more_rules)).contains(c));
  }
}
