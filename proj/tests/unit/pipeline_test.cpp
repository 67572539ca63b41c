#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "hml/backends.hpp"
#include "hml/parser.hpp"
#include "hml/pipeline.hpp"
#include "oracles.hpp"

namespace hml {
namespace {

using testing::corpus_inputs;
using testing::corpus_source;

PipelineConfig config(std::uint32_t w, Level level = Level::Arith, bool opt = true) {
  PipelineConfig cfg;
  cfg.bitwidth = w;
  cfg.level = level;
  if (!opt) cfg.passes = std::vector<std::string>{};
  return cfg;
}

const char* const kCorpus[] = {"gcd", "auction", "mergesort", "matvec", "pow8", "adder", "geq"};

TEST(Pipeline, CorpusMatchesAstOracleAtEveryLevel) {
  for (const char* name : kCorpus) {
    SCOPED_TRACE(name);
    const std::string src = corpus_source(name);
    const InputMap in = corpus_inputs(name);
    const OutputMap want = testing::run_ast(parse_source(src), in, 16);
    EXPECT_EQ(interpret_clear(compile(src, config(16)), in), want);
    EXPECT_EQ(interpret_clear(compile(src, config(16, Level::Arith, false)), in), want);
    EXPECT_EQ(interpret_clear(compile(src, config(16, Level::Bool)), in), want);
  }
}

TEST(Pipeline, CorpusMatchesDirectOracles) {
  auto run = [](const std::string& name) {
    return interpret_clear(compile(corpus_source(name), config(16)), corpus_inputs(name));
  };
  EXPECT_EQ(run("gcd").at("r"), testing::euclid_gcd(5, 15));
  auto auction = run("auction");
  auto want = testing::second_price({12, 20, 15});
  EXPECT_EQ(auction.at("winner"), want.winner);
  EXPECT_EQ(auction.at("price"), want.price);
  auto sorted = run("mergesort");
  auto expect = testing::sorted_copy({3, 1, 5, 2});
  for (std::size_t i = 0; i < expect.size(); ++i)
    EXPECT_EQ(sorted.at("sorted[" + std::to_string(i) + "]"), expect[i]);
  EXPECT_EQ(run("pow8").at("y"), 256);
  EXPECT_EQ(run("adder").at("s"), 15);
  EXPECT_EQ(run("geq").at("r"), 1);
}

TEST(Pipeline, RandomProgramsTypeCheckAndAgree) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const std::string src = testing::random_program(rng);
    SCOPED_TRACE(src);
    const InputMap in = testing::random_inputs(rng, 64);
    const OutputMap want = testing::run_ast(parse_source(src), in, 64);
    ASSERT_EQ(interpret_clear(compile(src, config(64)), in), want);
  }
}

TEST(Pipeline, TypeErrorsCarryStageAndDiagnostics) {
  try {
    compile(corpus_source("print_private"), config(16), "print_private.hml");
    FAIL() << "expected a type error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "typecheck");
    EXPECT_NE(std::string(e.what()).find("error[output]"), std::string::npos);
  }
}

TEST(Pipeline, ParseErrorsCarryStage) {
  try {
    compile("val x : int := ;", config(16));
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "parse");
  }
}

TEST(Pipeline, BoolLevelRequestBitblastsAfterOptimizing) {
  Circuit c = compile(corpus_source("adder"), config(4, Level::Bool));
  EXPECT_EQ(c.level, Level::Bool);
  EXPECT_EQ(c.count(GateKind::Add), 0u);
}

TEST(Pipeline, ReadFileReportsMissingPath) {
  EXPECT_THROW(read_file("/nonexistent/x.hml"), IoError);
}

}  // namespace
}  // namespace hml
