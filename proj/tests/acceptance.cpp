// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "iconsift/corpus_index.hpp"
#include "iconsift/error.hpp"
#include "iconsift/matcher.hpp"
#include "iconsift/notation.hpp"
#include "iconsift/pipeline.hpp"
#include "iconsift/rules.hpp"
#include "iconsift/similarity.hpp"
#include "oracles.hpp"

using namespace iconsift;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kFixtures = ICONSIFT_FIXTURE_DIR;

struct Check {
  std::string failure;
  void expect(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

int failures = 0;

void criterion(int number, const char* name, double limit_s, const std::function<void(Check&)>& body) {
  Check check;
  const auto start = Clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  check.expect(elapsed < limit_s, "took " + std::to_string(elapsed) + " s");
  const bool ok = check.failure.empty();
  if (!ok) ++failures;
  std::printf("%s %d %s (%.3f s)%s%s\n", ok ? "PASS" : "FAIL", number, name, elapsed, ok ? "" : ": ",
              check.failure.c_str());
  std::fflush(stdout);
}

LabelDocument labels(std::string id, LabelSet ls) { return {std::move(id), std::move(ls), {}}; }

const CodeSet kDogCodes = {"11H(CRISPIN & CRISPINIAN)69", "34B11", "43A3746",
                           "43C2181", "46E31", "73F215321"};

// 500 codes laid out as a tree: 10 divisions, letters, then digit chains.
std::vector<std::string> synthetic_vocabulary() {
  std::vector<std::string> codes;
  const char letters[] = "ABCDE";
  for (int div = 0; div < 10 && codes.size() < 500; ++div) {
    for (int l = 0; l < 5 && codes.size() < 500; ++l) {
      const std::string base = std::to_string(div) + std::to_string(div) + letters[l];
      codes.push_back(base);
      for (int a = 1; a <= 3 && codes.size() < 500; ++a) {
        codes.push_back(base + std::to_string(a));
        for (int b = 1; b <= 2 && codes.size() < 500; ++b) codes.push_back(base + std::to_string(a) + std::to_string(b));
      }
    }
  }
  for (int i = 0; codes.size() < 500; ++i) codes.push_back("25F2" + std::to_string(i % 10) + "(X" + std::to_string(i) + ")");
  return codes;
}

bool same_ranking(const std::vector<Recommendation>& got, const std::vector<oracle::Scored>& want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i)
    if (got[i].image_id != want[i].image_id || std::abs(got[i].score - want[i].score) > 1e-12) return false;
  return true;
}

}  // namespace

int main() {
  criterion(1, "dog keyword codes", 1.0, [](Check& c) {
    PipelineConfig cfg;
    cfg.vocab_path = kFixtures + "/vocab_dog.jsonl";
    const auto plain = Pipeline(cfg).classify(labels("dog.jpg", {"dog"}));
    c.expect(plain.codes_final == kDogCodes, "default run does not return the six dog codes");
    cfg.reducer = Reducer::shortest_title;
    const auto reduced = Pipeline(cfg).classify(labels("dog.jpg", {"dog"}));
    c.expect(reduced.codes_final == CodeSet{"34B11"}, "shortest_title does not select 34B11");
  });

  criterion(2, "hunt reproduction", 1.0, [](Check& c) {
    const auto vocab = Vocabulary::load_file(kFixtures + "/vocab_hunt.jsonl", VocabFormat::jsonl);
    const LabelSet ls = {"horse", "human being"};
    const auto base = map_keywords(ls, vocab, false);
    c.expect(base.codes == CodeSet{"46C13141(+78)"}, "pass 2 result differs");
    c.expect(base.pass_used == MatchPass::subset, "result did not come from pass 2");
    const auto single = map_keywords(ls, vocab, true);
    c.expect(single.codes.size() > base.codes.size(), "singleton is not a strict superset");
    for (const auto& code : base.codes) c.expect(single.codes.contains(code), "singleton dropped " + code);
    for (const auto& label : ls)
      for (const auto& code : vocab.codes_with_keyword(label))
        c.expect(single.codes.contains(code), "singleton missing " + code);
  });

  criterion(3, "hercules recommendation", 1.0, [](Check& c) {
    const auto docs = ingest_corpus_file(kFixtures + "/corpus_hercules.json", CorpusFormat::json_map);
    c.expect(docs.size() >= 20, "corpus too small");
    for (const auto& d : docs) c.expect(!d.codes.contains("94L53"), "corpus contains the query code");
    const auto idx = CorpusIndex::build(docs);
    const auto all = idx.recommend_all({"94L53"}, 1.0);
    const auto& h = all.at(Method::hierarchy);
    c.expect(h && h->image_id == "hercules_attributes.jpg", "hierarchy did not find the Hercules image");
    c.expect(h && std::abs(h->score - 1.0) < 1e-9, "hierarchy score is not 1.0");
    c.expect(!all.at(Method::idf), "idf returned a result");
    c.expect(!all.at(Method::jaccard), "jaccard returned a result");
  });

  criterion(4, "indexed recommend equals brute force", 60.0, [](Check& c) {
    const auto vocab = synthetic_vocabulary();
    std::mt19937_64 rng(20261018);
    for (int corpus = 0; corpus < 100; ++corpus) {
      std::vector<CorpusDoc> docs;
      const int n = 1 + static_cast<int>(rng() % 200);
      for (int d = 0; d < n; ++d) {
        CodeSet codes;
        const int m = 1 + static_cast<int>(rng() % 10);
        for (int k = 0; k < m; ++k) codes.insert(vocab[rng() % vocab.size()]);
        docs.push_back({"doc" + std::to_string(d), codes});
      }
      const auto idx = CorpusIndex::build(docs);
      for (int q = 0; q < 5; ++q) {
        CodeSet query;
        const int m = 1 + static_cast<int>(rng() % 4);
        for (int k = 0; k < m; ++k) query.insert(vocab[rng() % vocab.size()]);
        const double impact = 0.5 + static_cast<double>(rng() % 4) * 0.5;
        const std::size_t top_k = 1 + rng() % 10;
        for (Method method : kAllMethods) {
          const auto got = idx.recommend(query, method, {.top_k = top_k, .idf_impact = impact});
          const auto want = oracle::brute_force(docs, query, method, impact, top_k);
          c.expect(same_ranking(got, want),
                   std::string("mismatch for ") + to_string(method) + " in corpus " + std::to_string(corpus));
        }
      }
    }
  });

  criterion(5, "similarity axioms", 5.0, [](Check& c) {
    c.expect(jaccard({"34B11"}, {"34B11"}) == 1.0, "jaccard identity");
    c.expect(jaccard({"34B11"}, {"46E31"}) == 0.0, "jaccard disjoint");
    c.expect(jaccard({"34B11", "31A"}, {"31A"}) == jaccard({"31A"}, {"34B11", "31A"}), "jaccard symmetry");
    const std::vector<std::tuple<const char*, const char*, double>> buckets = {
        {"34B11", "34B11", 1.0}, {"34B11", "34B1", 0.5},   {"34B11", "34B12", 0.5},
        {"34B11", "34B", 0.25},  {"34B111", "34B121", 0.25}, {"34B11", "73F215321", 0.0}};
    for (const auto& [a, b, want] : buckets) {
      c.expect(oracle::relation(a, b) == want, std::string("oracle bucket ") + a + "/" + b);
      c.expect(hierarchy_score(CodeSet{a}, CodeSet{b}) == want, std::string("bucket ") + a + "/" + b);
      c.expect(hierarchy_score(CodeSet{b}, CodeSet{a}) == want, std::string("symmetry ") + a + "/" + b);
    }
    IdfTable t;
    t.n_docs = 4;
    t.doc_freq = {{"half", 2}, {"all", 4}, {"one", 1}};
    c.expect(std::abs(idf(t, "half") - 0.6931471805599453) < 1e-9, "ln 2");
    c.expect(idf(t, "all") == 0.0, "idf of a code in every document");
    c.expect(idf_overlap({"half", "one", "x"}, {"half", "one"}, t, 0.0) == 2.0, "impact 0 counts shared codes");

    const auto docs = ingest_corpus_file(kFixtures + "/corpus_hercules.json", CorpusFormat::json_map);
    const auto idx = CorpusIndex::build(docs);
    IdfTable base2 = idx.idf_table();
    base2.log_base = 2.0;
    const CodeSet query = {"34B11", "31A", "46C1314"};
    std::vector<std::pair<double, std::string>> e, two;
    for (const auto& d : idx.docs()) {
      e.emplace_back(-idf_overlap(query, d.codes, idx.idf_table(), 1.0), d.image_id);
      two.emplace_back(-idf_overlap(query, d.codes, base2, 1.0), d.image_id);
    }
    std::sort(e.begin(), e.end());
    std::sort(two.begin(), two.end());
    for (std::size_t i = 0; i < e.size(); ++i) c.expect(e[i].second == two[i].second, "ranking changed with log base");
  });

  criterion(6, "notation parser", 5.0, [](Check& c) {
    std::ifstream in(kFixtures + "/notations.txt");
    int count = 0;
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      ++count;
      const auto n = Notation::parse(line);
      c.expect(n.str() == line && render(n.path()) == line, "round trip failed for " + line);
      std::vector<std::string> chain;
      for (const auto& a : n.ancestors(1000)) chain.push_back(a.str());
      c.expect(chain == oracle::parent_chain(line), "parent chain differs for " + line);
    }
    c.expect(count == 200, "fixture does not hold 200 notations");
  });

  criterion(7, "rule engine", 1.0, [](Check& c) {
    const RuleSet chain({{"r1", {}, {"1A"}, {"2B"}, ""}, {"r2", {}, {"2B"}, {"3C"}, ""}});
    const auto trace = infer_traced({"1A"}, {}, chain);
    c.expect(trace.codes == CodeSet{"1A", "2B", "3C"}, "two-step chain");
    c.expect(trace.productive_rounds <= chain.size(), "too many rounds");

    std::mt19937 rng(3);
    const std::vector<std::string> pool = {"1A", "1B", "2A", "2B", "3A", "3B", "4A", "4B"};
    const std::vector<std::string> words = {"dog", "horse", "deer", "cat"};
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Rule> rules;
      for (int i = 0, n = 1 + static_cast<int>(rng() % 6); i < n; ++i) {
        Rule r{"r" + std::to_string(i), {}, {pool[rng() % pool.size()]}, {pool[rng() % pool.size()]}, ""};
        if (rng() % 2) r.if_labels.insert(words[rng() % words.size()]);
        rules.push_back(r);
      }
      const RuleSet rs(rules);
      const CodeSet codes = {pool[rng() % pool.size()]};
      const LabelSet ls = {words[rng() % words.size()]};
      const auto t = infer_traced(codes, ls, rs);
      for (const auto& code : codes) c.expect(t.codes.contains(code), "not extensive");
      c.expect(infer(t.codes, ls, rs) == t.codes, "not idempotent");
      c.expect(t.productive_rounds <= rs.size(), "did not terminate within |rules| rounds");
      LabelSet more = ls;
      more.insert(words[rng() % words.size()]);
      const auto bigger = infer(codes, more, rs);
      for (const auto& code : t.codes) c.expect(bigger.contains(code), "not monotone");
    }
  });

  criterion(8, "performance at 87k documents", 35.0, [](Check& c) {
    const auto vocab = synthetic_vocabulary();
    std::mt19937_64 rng(87000);
    std::vector<CorpusDoc> docs;
    docs.reserve(87000);
    for (int d = 0; d < 87000; ++d) {
      CodeSet codes;
      const int m = 1 + static_cast<int>(rng() % 9);  // mean 5
      while (static_cast<int>(codes.size()) < m) codes.insert(vocab[rng() % vocab.size()]);
      docs.push_back({"img" + std::to_string(d), codes});
    }
    const auto start = Clock::now();
    const auto idx = CorpusIndex::build(std::move(docs));
    const double build_s = std::chrono::duration<double>(Clock::now() - start).count();
    c.expect(build_s < 30.0, "build took " + std::to_string(build_s) + " s");

    double worst_ms = 0.0;
    for (int q = 0; q < 5; ++q) {
      CodeSet query;
      while (query.size() < 5) query.insert(vocab[rng() % vocab.size()]);
      const auto t0 = Clock::now();
      const auto all = idx.recommend_all(query, 1.0);
      worst_ms = std::max(worst_ms, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
      c.expect(all.size() == 3, "recommend_all missing methods");
    }
    c.expect(worst_ms < 50.0, "recommend_all took " + std::to_string(worst_ms) + " ms");
    std::printf("     build %.2f s, slowest recommend_all %.2f ms\n", build_s, worst_ms);
  });

  return failures == 0 ? 0 : 1;
}
