#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hml/backends.hpp"
#include "hml/estimator.hpp"
#include "hml/parser.hpp"
#include "hml/pipeline.hpp"
#include "oracles.hpp"

namespace hml {
namespace {

using Counts = std::map<GateKind, std::size_t>;

// Computational gates, reveals excluded.
Counts gates(const Circuit& c) {
  Counts out;
  for (const auto& n : c.nodes)
    if (!is_structural(n.kind) && !is_reveal(n.kind)) ++out[n.kind];
  return out;
}

Circuit lower(const std::string& src, ComparisonEncoding enc = ComparisonEncoding::Auto, bool keep_mux = true,
              std::uint32_t w = 16) {
  LowerConfig cfg;
  cfg.bitwidth = w;
  cfg.comparison_encoding = enc;
  cfg.keep_mux = keep_mux;
  return lower_program(check_program(parse_source(src), Scheme::generic()), cfg);
}

const char* kTwoInputs = "parties 0, 1; input a : int from 0; input b : int from 1; ";

TEST(Lower, ConstantExpressionBeforeOptimization) {
  Circuit c = lower("val x : int := 2 + 3; output x;");
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0].kind, GateKind::Const);
  EXPECT_EQ(c[1].kind, GateKind::Const);
  EXPECT_EQ(c[2].kind, GateKind::Add);
  EXPECT_EQ(c[3].kind, GateKind::Reveal);
  EXPECT_EQ(interpret_clear(c, {}).at("x"), 5);
}

TEST(Lower, InputsAndEvalsBecomeNodes) {
  Circuit c = lower(std::string(kTwoInputs) + "val s : int := eval({0, 1}, a + b); output s;");
  ASSERT_EQ(c.inputs.size(), 2u);
  EXPECT_EQ(c.inputs[0].party, 0u);
  EXPECT_EQ(c.inputs[1].party, 1u);
  EXPECT_EQ(c.count(GateKind::Reveal), 1u);
  ASSERT_EQ(c.outputs.size(), 1u);
  EXPECT_EQ(c.outputs[0].audience, (OwnerSet{0, 1}));
  EXPECT_EQ(c[c.inputs[0].node].meta, Meta::enc({0}));
}

TEST(Lower, AdditiveSchemeSharesInputs) {
  LowerConfig cfg;
  cfg.bitwidth = 16;
  cfg.scheme = Scheme::additive(3);
  Circuit c = lower_program(
      check_program(parse_source(testing::corpus_source("auction")), cfg.scheme), cfg);
  for (const auto& in : c.inputs) {
    const Meta& m = c[in.node].meta;
    EXPECT_EQ(m.kind, Meta::Kind::Shared);
    EXPECT_EQ(m.threshold, 3u);
    EXPECT_EQ(m.provider, (OwnerSet{in.party}));
  }
}

// The counter i never reaches the circuit: only the four accumulations do.
TEST(Unroll, SumLoopChainsFourAdds) {
  Circuit c = lower(
      "parties 0; input xs : int[4] from 0; val acc : int@{0} := 0; val i : int := 0;"
      "while (i < 4) { acc := acc + xs[i]; i := i + 1; } val r : int := eval({0}, acc); output r;");
  EXPECT_EQ(gates(c), (Counts{{GateKind::Add, 4}}));
  EXPECT_EQ(critical_path(c, {{GateKind::Add, 1}}), 4);
}

TEST(Unroll, EmptyRange) {
  Circuit c = lower(
      "parties 0; input x : int from 0; val acc : int@{0} := x; val i : int := 0;"
      "while (i < 0) { acc := acc * x; i := i + 1; } val r : int := eval({0}, acc); output r;");
  EXPECT_TRUE(gates(c).empty());
}

TEST(Unroll, MergeOfTwoAndTwoRunsFourCopies) {
  // The merge loop shape: res.length = 2 + 2 body copies.
  Circuit c = lower(
      "parties 0; input xs : int[2] from 0; input ys : int[2] from 0;"
      "val res : int[] := array(4); val k : int := 0; val t : int := 0;"
      "while (k < res.length) { t := t + 1; k := k + 1; } output t;");
  EXPECT_EQ(interpret_clear(c, {{{0, "xs[0]"}, 1}, {{0, "xs[1]"}, 2}, {{0, "ys[0]"}, 3}, {{0, "ys[1]"}, 4}})
                .at("t"),
            4);
}

TEST(Fuel, GcdUnrollsFiveComparisons) {
  // Bound 5: copies at fuel 5..1 test x == 0, the fuel-0 copy returns y.
  Circuit c = lower(testing::corpus_source("gcd"));
  EXPECT_EQ(c.count(GateKind::Eq), 5u);
  EXPECT_EQ(interpret_clear(c, testing::corpus_inputs("gcd")).at("r"), 5);
}

TEST(Fuel, ZeroBoundGivesBaseOnly) {
  Circuit c = lower(
      "parties 0; fun f(x: int@{0}): int@{0} bound 0 { if x == 0 then { x } else { f(x - 1) } }"
      "input a : int from 0; val r : int := eval({0}, f(a)); output r;");
  EXPECT_EQ(c.count(GateKind::Eq), 0u);
  EXPECT_EQ(c.count(GateKind::Sub), 0u);
}

TEST(Fuel, CountIsIndependentOfArguments) {
  for (int bound : {1, 2, 3, 7}) {
    Circuit c = lower("parties 0; fun f(x: int@{0}): int@{0} bound " + std::to_string(bound) +
                      " { if x == 0 then { x } else { f(x - 1) } }"
                      "input a : int from 0; val r : int := eval({0}, f(a)); output r;");
    EXPECT_EQ(c.count(GateKind::Eq), static_cast<std::size_t>(bound));
  }
}

TEST(Fuel, MissingBoundOnRecursion) {
  try {
    lower("parties 0; fun f(x: int@{0}): int@{0} { f(x) } input a : int from 0;"
          "val r : int := eval({0}, f(a)); output r;");
    FAIL();
  } catch (const LowerError& e) {
    EXPECT_EQ(e.code(), LowerError::Code::BoundMissing);
  }
}

TEST(Fuel, MergeSortRecursionIsBounded) {
  Circuit c = lower(testing::corpus_source("mergesort"));
  OutputMap out = interpret_clear(c, testing::corpus_inputs("mergesort"));
  EXPECT_EQ(out.at("sorted[0]"), 1);
  EXPECT_EQ(out.at("sorted[3]"), 5);
}

TEST(ObliviousIf, ArithmetizedMax) {
  Circuit c = lower(
      "parties 0; input xs : int[2] from 0; val m : int@{0} := xs[0];"
      "if (m < xs[1]) { m := xs[1]; } val r : int := eval({0}, m); output r;",
      ComparisonEncoding::Auto, /*keep_mux=*/false);
  EXPECT_EQ(gates(c), (Counts{{GateKind::Lt, 1}, {GateKind::Mul, 2}, {GateKind::Sub, 1}, {GateKind::Add, 1}}));
  EXPECT_EQ(interpret_clear(c, {{{0, "xs[0]"}, 4}, {{0, "xs[1]"}, 9}}).at("r"), 9);
  EXPECT_EQ(interpret_clear(c, {{{0, "xs[0]"}, 9}, {{0, "xs[1]"}, 4}}).at("r"), 9);
}

TEST(ObliviousIf, MuxKeptAsGate) {
  Circuit c = lower(
      "parties 0; input xs : int[2] from 0; val m : int@{0} := xs[0];"
      "if (m < xs[1]) { m := xs[1]; } val r : int := eval({0}, m); output r;");
  EXPECT_EQ(gates(c), (Counts{{GateKind::Lt, 1}, {GateKind::Mux, 1}}));
}

TEST(ObliviousIf, NoAssignmentsNoGates) {
  Circuit c = lower("parties 0; input a : int from 0; if (a < 1) { skip; } else { skip; } output 1;");
  EXPECT_EQ(c.count(GateKind::Mux), 0u);
}

TEST(ObliviousIf, SideEffectUnderPrivateCondition) {
  try {
    lower("parties 0; input a : int from 0; if (a < 1) { output 1; }");
    FAIL();
  } catch (const LowerError& e) {
    EXPECT_EQ(e.code(), LowerError::Code::SideEffectUndetectable);
  }
}

TEST(PrivateIndex, DepthIsCeilLog2) {
  for (std::size_t L = 1; L <= 64; ++L) {
    Circuit c;
    std::vector<NodeId> arr;
    for (std::size_t k = 0; k < L; ++k) arr.push_back(c.add_input(0, "v" + std::to_string(k), Meta::enc({0})));
    NodeId idx = c.add_input(0, "i", Meta::enc({0}));
    NodeId out = lower_private_index(c, arr, idx);
    EXPECT_EQ(c.count(GateKind::Mux), L - 1);
    const std::int64_t depth = critical_path(c, {{GateKind::Mux, 1}});
    EXPECT_EQ(depth, static_cast<std::int64_t>(std::ceil(std::log2(static_cast<double>(L))))) << L;
    if (L == 1) EXPECT_EQ(out, arr[0]);
  }
}

TEST(PrivateIndex, SelectsAndClamps) {
  Circuit c(Level::Arith, 16);
  std::vector<NodeId> arr;
  for (int k = 0; k < 5; ++k) arr.push_back(c.add_input(0, "v" + std::to_string(k), Meta::enc({0})));
  NodeId idx = c.add_input(0, "i", Meta::enc({0}));
  c.add_output(c.add_reveal(lower_private_index(c, arr, idx), {0}), "r");
  InputMap in;
  for (int k = 0; k < 5; ++k) in[{0, "v" + std::to_string(k)}] = 10 * (k + 1);
  for (int i = -2; i < 8; ++i) {
    in[{0, "i"}] = i;
    EXPECT_EQ(interpret_clear(c, in).at("r"), 10 * (std::clamp(i, 0, 4) + 1)) << i;
  }
}

TEST(PrivateUpdate, ThreeEqThreeMux) {
  Circuit c(Level::Arith, 16);
  std::vector<NodeId> arr;
  for (int k = 0; k < 3; ++k) arr.push_back(c.add_input(0, "a" + std::to_string(k), Meta::enc({0})));
  NodeId idx = c.add_input(0, "i", Meta::enc({0}));
  NodeId val = c.add_input(0, "v", Meta::enc({0}));
  auto out = lower_private_update(c, arr, idx, val);
  EXPECT_EQ(gates(c), (Counts{{GateKind::Eq, 3}, {GateKind::Mux, 3}}));
  for (int k = 0; k < 3; ++k) c.add_output(c.add_reveal(out[k], {0}), "r" + std::to_string(k));
  OutputMap r = interpret_clear(c, {{{0, "a0"}, 1}, {{0, "a1"}, 2}, {{0, "a2"}, 3}, {{0, "i"}, 1}, {{0, "v"}, 9}});
  EXPECT_EQ(r, (OutputMap{{"r0", 1}, {"r1", 9}, {"r2", 3}}));
}

TEST(PrivateUpdate, PlainIndexIsPositionalStore) {
  Circuit c = lower(
      "parties 0; input x : int from 0; val r : int[] := array(3); r.update(1, x);"
      "val o : int[] := eval({0}, r); output o;");
  EXPECT_EQ(c.count(GateKind::Eq), 0u);
  EXPECT_EQ(c.count(GateKind::Mux), 0u);
}

TEST(Comparison, GeqEncodings) {
  const std::string src = std::string(kTwoInputs) + "val r : bool := eval({0, 1}, a >= b); output r;";
  EXPECT_EQ(gates(lower(src, ComparisonEncoding::Direct)),
            (Counts{{GateKind::Lt, 1}, {GateKind::Add, 1}, {GateKind::Eq, 1}}));
  EXPECT_EQ(gates(lower(src, ComparisonEncoding::RewriteGeq)), (Counts{{GateKind::Lt, 1}, {GateKind::Sub, 1}}));
}

TEST(Comparison, NeqIsOneMinusEq) {
  const std::string src = std::string(kTwoInputs) + "val r : bool := eval({0, 1}, a != b); output r;";
  EXPECT_EQ(gates(lower(src)), (Counts{{GateKind::Eq, 1}, {GateKind::Sub, 1}}));
}

TEST(Comparison, AllOperatorsAgreeWithIntegers) {
  const char* ops[] = {"<", "<=", ">", ">=", "==", "!="};
  for (auto enc : {ComparisonEncoding::Direct, ComparisonEncoding::RewriteGeq}) {
    for (const char* op : ops) {
      Circuit c = lower(std::string(kTwoInputs) + "val r : bool := eval({0, 1}, a " + op + " b); output r;", enc);
      for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) {
          const std::string o = op;
          const bool want = o == "<" ? a < b : o == "<=" ? a <= b : o == ">" ? a > b : o == ">=" ? a >= b
                          : o == "==" ? a == b : a != b;
          EXPECT_EQ(interpret_clear(c, {{{0, "a"}, a}, {{1, "b"}, b}}).at("r"), want) << a << op << b;
        }
    }
  }
}

TEST(Reduce, SumOfEightIsBalanced) {
  Circuit c = lower("parties 0; input xs : int[8] from 0; val s : int := eval({0}, reduce(+, xs)); output s;");
  EXPECT_EQ(gates(c), (Counts{{GateKind::Add, 7}}));
  EXPECT_EQ(critical_path(c, {{GateKind::Add, 1}}), 3);
}

TEST(Reduce, MaxOfFour) {
  Circuit c = lower("parties 0; input xs : int[4] from 0; val s : int := eval({0}, reduce(max, xs)); output s;");
  EXPECT_EQ(gates(c), (Counts{{GateKind::Lt, 3}, {GateKind::Mux, 3}}));
  EXPECT_EQ(critical_path(c, {{GateKind::Mux, 1}}), 2);
  std::vector<std::int64_t> xs = {4, -2, 11, 7};
  InputMap in;
  for (int k = 0; k < 4; ++k) in[{0, "xs[" + std::to_string(k) + "]"}] = xs[k];
  EXPECT_EQ(interpret_clear(c, in).at("s"), *std::max_element(xs.begin(), xs.end()));
}

TEST(Reduce, SingleElementIsTheWire) {
  Circuit c = lower("parties 0; input xs : int[1] from 0; val s : int := eval({0}, reduce(*, xs)); output s;");
  EXPECT_TRUE(gates(c).empty());
}

TEST(Modulo, PrivateOperandsMatchIntegers) {
  Circuit c = lower(std::string(kTwoInputs) + "val r : int := eval({0, 1}, a % b); output r;");
  for (int a : {0, 1, 7, 15, 100, 4095})
    for (int b : {1, 2, 5, 9, 64})
      EXPECT_EQ(interpret_clear(c, {{{0, "a"}, a}, {{1, "b"}, b}}).at("r"), a % b) << a << "%" << b;
}

TEST(Lower, SemanticPreservationAgainstAst) {
  std::mt19937_64 rng(11);
  for (const char* name : {"gcd", "auction", "mergesort", "matvec"}) {
    const std::string src = testing::corpus_source(name);
    Circuit c = lower(src);
    InputMap in = testing::corpus_inputs(name);
    for (int trial = 0; trial < 10; ++trial) {
      for (auto& [key, v] : in) v = std::uniform_int_distribution<std::int64_t>(1, 900)(rng);
      EXPECT_EQ(interpret_clear(c, in), testing::run_ast(parse_source(src), in, 16)) << name;
    }
  }
}

TEST(Lower, RejectsBadBitwidth) {
  LowerConfig cfg;
  cfg.bitwidth = 65;
  EXPECT_THROW(lower_program(check_program(parse_source("skip;"), Scheme::generic()), cfg), LowerError);
}

}  // namespace
}  // namespace hml
