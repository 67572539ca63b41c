#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "hml/backends.hpp"
#include "hml/pipeline.hpp"
#include "oracles.hpp"

namespace hml {
namespace {

const Meta kShared012 = Meta::shared({0}, {0, 1, 2}, {1, 2}, 3);

TEST(AddNode, IdsAreSequential) {
  Circuit c;
  EXPECT_EQ(c.add_const(5), 0u);
  EXPECT_EQ(c.add_const(6), 1u);
  EXPECT_EQ(c.add_node(GateKind::Add, {0, 1}), 2u);
  EXPECT_EQ(c.size(), 3u);
}

TEST(AddNode, RejectsForwardReference) {
  Circuit c;
  c.add_const(1);
  c.add_const(2);
  EXPECT_THROW(c.add_node(GateKind::Add, {5, 0}), ForwardReferenceError);
}

TEST(AddNode, RejectsWrongArity) {
  Circuit c;
  c.add_const(1);
  EXPECT_THROW(c.add_node(GateKind::Add, {0}), ArityError);
  EXPECT_THROW(c.add_node(GateKind::Mux, {0, 0}), ArityError);
  EXPECT_THROW(c.add_node(GateKind::MulPlain, {0}), ArityError);  // payload missing
}

TEST(CombineShareMeta, GenericUnitesObservers) {
  Meta a = Meta::shared({0}, {0, 1, 2}, {1, 2}, 3);
  Meta b = Meta::shared({1}, {0, 1, 2}, {2, 3}, 3);
  Meta m = combine_share_meta(a, b, Scheme::generic());
  EXPECT_EQ(m.observers, (OwnerSet{1, 2, 3}));
  EXPECT_EQ(m.provider, (OwnerSet{0, 1}));
  EXPECT_EQ(m.players, (OwnerSet{0, 1, 2}));
  EXPECT_EQ(m.threshold, 3u);
}

TEST(CombineShareMeta, AdditiveIntersectsObservers) {
  Meta a = Meta::shared({0}, {0, 1, 2}, {1, 2}, 3);
  Meta b = Meta::shared({1}, {0, 1, 2}, {2, 3}, 3);
  EXPECT_EQ(combine_share_meta(a, b, Scheme::additive(3)).observers, (OwnerSet{2}));
}

TEST(CombineShareMeta, AdditiveRequiresFullThreshold) {
  Meta a = Meta::shared({0}, {0, 1, 2}, {0}, 2);
  try {
    combine_share_meta(a, a, Scheme::additive(3));
    FAIL();
  } catch (const ShareMismatchError& e) {
    EXPECT_NE(std::string(e.what()).find("players.size == x.threshold"), std::string::npos);
  }
}

TEST(CombineShareMeta, MismatchedPlayers) {
  Meta a = Meta::shared({0}, {0, 1}, {0}, 2);
  Meta b = Meta::shared({0}, {0, 2}, {0}, 2);
  EXPECT_THROW(combine_share_meta(a, b, Scheme::generic()), ShareMismatchError);
}

TEST(CombineShareMeta, CommutativeInProviderAndObservers) {
  Meta a = Meta::shared({0}, {0, 1, 2}, {1}, 3);
  Meta b = Meta::shared({2}, {0, 1, 2}, {0, 1}, 3);
  for (Scheme s : {Scheme::generic(), Scheme::additive(3)})
    EXPECT_EQ(combine_share_meta(a, b, s), combine_share_meta(b, a, s));
}

TEST(CombineMeta, PlainIsNeutral) {
  EXPECT_EQ(combine_meta(Meta::plain(), kShared012, Scheme::generic()), kShared012);
  EXPECT_EQ(combine_meta(Meta::enc({1}), Meta::enc({2}), Scheme::generic()), Meta::enc({1, 2}));
  EXPECT_THROW(combine_meta(Meta::enc({1}), kShared012, Scheme::generic()), ShareMismatchError);
}

TEST(Validate, EmptyCircuitIsOk) { EXPECT_TRUE(validate(Circuit{}).empty()); }

TEST(Validate, LevelPurity) {
  Circuit c(Level::Bool, 8);
  NodeId a = c.add_node(GateKind::ConstBit, {}, {}, 1);
  NodeId b = c.add_node(GateKind::ConstBit, {}, {}, 0);
  c.add_node(GateKind::And, {a, b});
  c.add_node(GateKind::Mul, {a, b});
  auto errs = validate(c);
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_NE(errs[0].find("level purity"), std::string::npos);
}

TEST(Validate, IncompatibleShareMeta) {
  Circuit c;
  NodeId a = c.add_input(0, "a", Meta::shared({0}, {0, 1}, {0}, 2));
  NodeId b = c.add_input(1, "b", Meta::shared({1}, {0, 1, 2}, {1}, 3));
  c.add_node(GateKind::Add, {a, b}, Meta::shared({0, 1}, {0, 1}, {0, 1}, 2));
  EXPECT_FALSE(validate(c).empty());
}

TEST(Validate, OutputsMustBeReveals) {
  Circuit c;
  NodeId a = c.add_input(0, "a", Meta::enc({0}));
  c.outputs.push_back({a, {0}, "a", std::nullopt});
  EXPECT_FALSE(validate(c).empty());
}

TEST(Validate, LoweredCorpusIsOk) {
  for (const char* name : {"gcd", "auction", "mergesort", "matvec"}) {
    PipelineConfig cfg;
    cfg.bitwidth = 16;
    cfg.passes = std::vector<std::string>{};
    EXPECT_TRUE(validate(compile(testing::corpus_source(name), cfg)).empty()) << name;
  }
}

TEST(TopologicalOrder, IsIdentity) {
  Circuit c;
  c.add_const(1);
  c.add_const(2);
  c.add_node(GateKind::Add, {0, 1});
  EXPECT_EQ(topological_eval_order(c), (std::vector<NodeId>{0, 1, 2}));
}

TEST(TopologicalOrder, OptimizedPow8) {
  PipelineConfig cfg;
  cfg.bitwidth = 16;
  Circuit c = compile(testing::corpus_source("pow8"), cfg);
  std::vector<NodeId> muls;
  for (NodeId id : topological_eval_order(c))
    if (c[id].kind == GateKind::Mul) muls.push_back(id);
  ASSERT_EQ(muls.size(), 3u);
  EXPECT_TRUE(std::is_sorted(muls.begin(), muls.end()));
  EXPECT_EQ(c.count(GateKind::Input), 1u);
  for (NodeId id = 0; id < c.size(); ++id)
    for (NodeId o : c[id].operands) EXPECT_LT(o, id);
}

TEST(Wrap, TwoComplement) {
  EXPECT_EQ(wrap(7, 3), -1);
  EXPECT_EQ(wrap(4, 3), -4);
  EXPECT_EQ(wrap(3, 3), 3);
  EXPECT_EQ(wrap(-1, 64), -1);
}

TEST(EvalGate, ComparisonSemantics) {
  const std::int64_t lt[] = {2, 3};
  EXPECT_EQ(eval_gate(GateKind::Lt, lt, std::nullopt, 16), 1);
  const std::int64_t leq[] = {3, 3};
  EXPECT_EQ(eval_gate(GateKind::Leq, leq, std::nullopt, 16), 1);
  const std::int64_t mux[] = {0, 10, 20};
  EXPECT_EQ(eval_gate(GateKind::Mux, mux, std::nullopt, 16), 20);
}

TEST(Json, RoundTripsRandomCircuits) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    Circuit c = testing::random_circuit(rng, 40, 32);
    EXPECT_EQ(circuit_from_json(circuit_to_json(c)), c);
  }
}

TEST(Json, RoundTripsSharedMetaAndAudience) {
  PipelineConfig cfg;
  cfg.bitwidth = 16;
  cfg.scheme = Scheme::additive(3);
  Circuit c = compile(testing::corpus_source("auction"), cfg);
  EXPECT_EQ(circuit_from_json(circuit_to_json(c)), c);
}

TEST(Json, RejectsIdMismatch) {
  const char* text = R"({"level":"arith","bitwidth":8,"nodes":[{"id":1,"kind":"Const","operands":[],
    "meta":{"kind":"plain"},"payload":3}],"inputs":[],"outputs":[]})";
  EXPECT_THROW(circuit_from_json(text), Error);
}

}  // namespace
}  // namespace hml
