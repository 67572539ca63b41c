#include <gtest/gtest.h>

#include <random>

#include "hml/backends.hpp"
#include "hml/pipeline.hpp"
#include "oracles.hpp"

namespace hml {
namespace {

const char* const kCorpus[] = {"adder", "auction", "gcd", "geq", "matvec", "mergesort", "pow8"};

Circuit corpus(const std::string& name, std::uint32_t w = 16, Scheme scheme = Scheme::generic()) {
  PipelineConfig cfg;
  cfg.bitwidth = w;
  cfg.scheme = scheme;
  return compile(testing::corpus_source(name), cfg);
}

SimulateOptions opts(std::uint64_t seed, std::uint32_t w = 16, std::uint32_t parties = 3) {
  SimulateOptions o;
  o.parties = parties;
  o.seed = seed;
  o.model = secret_sharing_model(w);
  return o;
}

TEST(Shared, AgreesWithClearOnCorpus) {
  for (const char* name : kCorpus) {
    const Circuit c = corpus(name);
    const InputMap in = testing::corpus_inputs(name);
    const OutputMap want = interpret_clear(c, in);
    for (std::uint64_t seed : {0u, 1u, 99u}) EXPECT_EQ(simulate_shared(c, in, opts(seed)).outputs, want) << name;
  }
}

TEST(Shared, AdditiveSchemeCircuits) {
  const Circuit c = corpus("auction", 16, Scheme::additive(3));
  EXPECT_EQ(simulate_shared(c, testing::corpus_inputs("auction"), opts(5)).outputs,
            (OutputMap{{"winner", 1}, {"price", 15}}));
  EXPECT_THROW(simulate_shared(c, testing::corpus_inputs("auction"), opts(5, 16, 4)), PlayerMismatchError);
}

TEST(Shared, RandomInputsAgree) {
  std::mt19937_64 rng(17);
  const Circuit c = corpus("auction");
  for (int i = 0; i < 30; ++i) {
    InputMap in;
    for (Party p = 0; p < 3; ++p) in[{p, "b" + std::to_string(p)}] = static_cast<std::int64_t>(rng() % 4000) - 2000;
    EXPECT_EQ(simulate_shared(c, in, opts(rng())).outputs, interpret_clear(c, in));
  }
}

TEST(Shared, LinearCircuitIsFree) {
  const ExecTrace t = simulate_shared(corpus("adder"), testing::corpus_inputs("adder"), opts(0)).trace;
  EXPECT_EQ(t.rounds, 0u);
  EXPECT_EQ(t.multicasts, 0u);
  EXPECT_EQ(t.triples_consumed, 0u);
}

TEST(Shared, PowEightTrace) {
  const ExecTrace t = simulate_shared(corpus("pow8"), testing::corpus_inputs("pow8"), opts(0)).trace;
  EXPECT_EQ(t.triples_consumed, 3u);
  EXPECT_EQ(t.rounds, 3u);
  EXPECT_EQ(t.multicasts, 6u);
}

TEST(Shared, TriplesMatchTheEstimate) {
  for (const char* name : kCorpus) {
    const Circuit c = corpus(name);
    const SharedResult r = simulate_shared(c, testing::corpus_inputs(name), opts(2));
    const PreprocessingBudget want = estimate(c, secret_sharing_model(16)).preprocessing;
    EXPECT_EQ(r.trace.triples_consumed, want.triples) << name;
    EXPECT_EQ(r.trace.bits_consumed, want.random_bits) << name;
    EXPECT_EQ(r.offline, want) << name;
  }
}

TEST(Shared, Deterministic) {
  const Circuit c = corpus("mergesort");
  const InputMap in = testing::corpus_inputs("mergesort");
  SimulateOptions o = opts(11);
  o.record_access = true;
  const SharedResult a = simulate_shared(c, in, o), b = simulate_shared(c, in, o);
  EXPECT_EQ(a.outputs, b.outputs);
  EXPECT_EQ(a.trace, b.trace);
  ASSERT_EQ(a.access_log.size(), b.access_log.size());
}

TEST(Shared, OnlyOpeningsReadSeveralParties) {
  SimulateOptions o = opts(3);
  o.record_access = true;
  const SharedResult r = simulate_shared(corpus("auction"), testing::corpus_inputs("auction"), o);
  ASSERT_FALSE(r.access_log.empty());
  std::size_t opens = 0;
  for (const auto& a : r.access_log) {
    if (a.op == "reveal" || a.op == "compare") {
      EXPECT_EQ(a.parties.size(), 3u);
      ++opens;
    } else {
      EXPECT_EQ(a.parties.size(), 1u) << a.op << " at node " << a.node;
    }
  }
  EXPECT_GT(opens, 0u);
}

TEST(Shared, Errors) {
  const Circuit c = corpus("adder");
  EXPECT_THROW(simulate_shared(c, {{{0, "a"}, 1}}, opts(0)), MissingInputError);
  EXPECT_THROW(simulate_shared(c, {{{0, "a"}, 1 << 14}, {{1, "b"}, 0}}, opts(0)), OverflowContractError);
  EXPECT_THROW(simulate_shared(c, testing::corpus_inputs("adder"), opts(0, 16, 1)), Error);
}

TEST(Shared, WideWordsNeedSmallValues) {
  EXPECT_EQ(simulate_shared(corpus("gcd", 61), testing::corpus_inputs("gcd"), opts(0, 61)).outputs.at("r"), 5);
  EXPECT_EQ(simulate_shared(corpus("auction", 64), testing::corpus_inputs("auction"), opts(0, 64)).outputs.at("price"), 15);
  EXPECT_THROW(simulate_shared(corpus("gcd", 64), testing::corpus_inputs("gcd"), opts(0, 64)), OverflowContractError);
  EXPECT_THROW(simulate_shared(corpus("adder", 64), {{{0, "a"}, std::int64_t{1} << 40}, {{1, "b"}, 0}}, opts(0, 64)),
               OverflowContractError);
}

}  // namespace
}  // namespace hml
