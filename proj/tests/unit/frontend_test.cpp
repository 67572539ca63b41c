#include <gtest/gtest.h>

#include "hml/lexer.hpp"
#include "hml/parser.hpp"
#include "oracles.hpp"

namespace hml {
namespace {

using K = TokenKind;

std::vector<K> kinds(std::string_view src) {
  std::vector<K> out;
  for (const auto& t : tokenize(src)) out.push_back(t.kind);
  return out;
}

TEST(Lexer, DeclarationTokens) {
  auto toks = tokenize("val x : int@{1} := 5;");
  std::vector<K> want = {K::Val, K::Ident, K::Colon, K::Int, K::At, K::LBrace,
                         K::Num, K::RBrace, K::Assign, K::Num, K::Semi};
  EXPECT_EQ(kinds("val x : int@{1} := 5;"), want);
  EXPECT_EQ(toks[1].text, "x");
  EXPECT_EQ(toks[9].text, "5");
}

TEST(Lexer, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Lexer, WhileLoopTokenCount) {
  // while ( i < 4 ) { skip ; }
  auto k = kinds("while (i < 4) { skip; }");
  ASSERT_EQ(k.size(), 10u);
  EXPECT_EQ(k[k.size() - 2], K::Semi);
  EXPECT_EQ(k.back(), K::RBrace);
}

TEST(Lexer, CommentsAreDropped) {
  EXPECT_EQ(kinds("skip; // the rest := is ignored\nskip;"),
            (std::vector<K>{K::Skip, K::Semi, K::Skip, K::Semi}));
}

TEST(Lexer, OperatorsAreLongestMatch) {
  EXPECT_EQ(kinds("<= < >= > == != := && || % /"),
            (std::vector<K>{K::Le, K::Lt, K::Ge, K::Gt, K::EqEq, K::NotEq, K::Assign, K::AndAnd,
                            K::OrOr, K::Percent, K::Slash}));
}

TEST(Lexer, PositionsStrictlyIncrease) {
  auto toks = tokenize(testing::corpus_source("auction"));
  for (std::size_t i = 1; i < toks.size(); ++i) EXPECT_LT(toks[i - 1].pos, toks[i].pos);
}

TEST(Lexer, IllegalCharacterReportsPosition) {
  try {
    tokenize("val x\n  : int := $;");
    FAIL();
  } catch (const LexError& e) {
    EXPECT_EQ(e.position().line, 2u);
    EXPECT_EQ(e.position().column, 12u);
  }
}

TEST(Parser, SkipProgram) {
  ast::Program p = parse_source("skip;");
  ASSERT_EQ(p.main.stmts.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<ast::Skip>(p.main.stmts[0].node));
  EXPECT_TRUE(p.functions.empty());
}

TEST(Parser, GcdHasOneBoundedFunction) {
  ast::Program p = parse_source(testing::corpus_source("gcd"));
  ASSERT_EQ(p.functions.size(), 1u);
  const auto& f = p.functions[0];
  EXPECT_EQ(f.name, "gcd");
  ASSERT_TRUE(f.bound.has_value());
  EXPECT_EQ(**f.bound, ast::make_int(5));
  EXPECT_EQ(f.params.size(), 2u);
}

TEST(Parser, AuctionLoopBound) {
  ast::Program p = parse_source(testing::corpus_source("auction"));
  const ast::While* loop = nullptr;
  int loops = 0;
  ast::for_each_stmt(p.main, [&](const ast::Stmt& s) {
    if (const auto* w = std::get_if<ast::While>(&s.node)) {
      loop = w;
      ++loops;
    }
  });
  ASSERT_EQ(loops, 1);
  EXPECT_EQ(loop->var, "i");
  // bids.length - 2
  ast::Expr want = ast::make_binop(ast::BinaryOp::Sub, ast::Expr{ast::ArrLen{"bids"}, {}}, ast::make_int(2));
  EXPECT_EQ(*loop->bound, want);
}

TEST(Parser, ErrorCarriesExpectedSet) {
  try {
    parse_source("val x : int := ;");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position().column, 16u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parser, PrecedenceMulBindsTighter) {
  ast::Program p = parse_source("val x : int := 1 + 2 * 3;");
  const auto& d = std::get<ast::ValDecl>(p.main.stmts[0].node);
  const auto& top = std::get<ast::BinOp>(d.init->node);
  EXPECT_EQ(top.op, ast::BinaryOp::Add);
  EXPECT_EQ(std::get<ast::BinOp>(top.rhs->node).op, ast::BinaryOp::Mul);
}

TEST(PrettyPrint, SkipIsCanonical) { EXPECT_EQ(pretty_print(parse_source("skip;")), "skip;\n"); }

TEST(PrettyPrint, CorpusRoundTripsToFixpoint) {
  for (const char* name : {"gcd", "auction", "mergesort", "matvec", "pow8", "adder", "geq", "print_private"}) {
    SCOPED_TRACE(name);
    ast::Program p = parse_source(testing::corpus_source(name));
    const std::string once = pretty_print(p);
    ast::Program q = parse_source(once);
    EXPECT_EQ(q, p);
    EXPECT_EQ(pretty_print(q), once);
  }
}

}  // namespace
}  // namespace hml
