#include <gtest/gtest.h>

#include <cstring>

#include "smoothck/error.hpp"
#include "smoothck/model.hpp"

namespace smoothck {
namespace {

constexpr const char* kSir =
    "# SIR\n"
    "species S=99 I=1 R=0\n"
    "param k_i=0.12 k_r=0.05\n"
    "reaction S + I -> I + I @ k_i*S*I\n"
    "reaction I -> R @ k_r*I\n";

TEST(ModelParse, Sir) {
  const Model m = parse_model(kSir);
  EXPECT_EQ(m.species, (std::vector<std::string>{"S", "I", "R"}));
  ASSERT_EQ(m.parameters.size(), 2u);
  EXPECT_EQ(m.parameters[0].name, "k_i");
  EXPECT_DOUBLE_EQ(m.parameters[1].value, 0.05);
  ASSERT_EQ(m.reactions.size(), 2u);
  EXPECT_EQ(m.reactions[0].consumed, (std::vector<std::int64_t>{1, 1, 0}));
  EXPECT_EQ(m.reactions[0].produced, (std::vector<std::int64_t>{0, 2, 0}));
  EXPECT_EQ(m.reactions[0].net_change(), (std::vector<std::int64_t>{-1, 1, 0}));
  EXPECT_EQ(m.initial_state, (std::vector<std::int64_t>{99, 1, 0}));
}

TEST(ModelParse, StoichiometryAndEmptySides) {
  const Model m = parse_model(
      "species A=3 B=0\nparam k=1.5e-1\nreaction 2 A + B -> 0 @ k*A\nreaction -> B @ k\n");
  EXPECT_EQ(m.reactions[0].consumed, (std::vector<std::int64_t>{2, 1}));
  EXPECT_EQ(m.reactions[0].produced, (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(m.reactions[1].consumed, (std::vector<std::int64_t>{0, 0}));
  EXPECT_DOUBLE_EQ(m.parameters[0].value, 0.15);
}

TEST(ModelParse, EmptyTextIsSyntaxError) { EXPECT_THROW(parse_model(""), ParseError); }

TEST(ModelParse, UndeclaredIdentifierIsNamed) {
  try {
    parse_model("species S=1\nparam k=1\nreaction S -> 0 @ k*Z\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("'Z'"), std::string::npos) << e.what();
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ModelParse, RejectsDuplicatesAndBadStoichiometry) {
  EXPECT_THROW(parse_model("species S=1 S=2\nreaction S -> 0 @ 1\n"), ParseError);
  EXPECT_THROW(parse_model("species S=1\nparam S=2\nreaction S -> 0 @ 1\n"), ParseError);
  EXPECT_THROW(parse_model("species S=1\nreaction 1.5 S -> 0 @ 1\n"), ParseError);
  EXPECT_THROW(parse_model("species S=1\nreaction -2 S -> 0 @ 1\n"), ParseError);
  EXPECT_THROW(parse_model("species S\nreaction S -> 0 @ 1\n"), ParseError);
  EXPECT_THROW(parse_model("species S=1\nreaction S -> 0\n"), ParseError);
  EXPECT_THROW(parse_model("species S=1\nreaction S -> 0 @ 1 +\n"), ParseError);
}

TEST(ModelParse, ErrorPositionPointsAtOffendingToken) {
  try {
    parse_model("species S=1\nreaction S -> 0 @ 2 * * S\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 1);
  }
}

TEST(ModelValidate, WellFormedSir) { EXPECT_NO_THROW(validate_model(parse_model(kSir))); }

TEST(ModelValidate, ReportsEveryViolation) {
  Model m = parse_model(kSir);
  m.initial_state = {1, 2};
  m.species.push_back("S");
  m.reactions[1].consumed[0] = -1;
  try {
    validate_model(m);
    FAIL();
  } catch (const ValidationError& e) {
    const auto& v = e.violations();
    auto mentions = [&](const std::string& needle) {
      for (const auto& s : v) {
        if (s.find(needle) != std::string::npos) return true;
      }
      return false;
    };
    EXPECT_TRUE(mentions("'S'")) << e.what();
    EXPECT_TRUE(mentions("2 entries, expected 4")) << e.what();
    EXPECT_GE(v.size(), 3u);
  }
}

TEST(ModelValidate, WrongInitialLengthListsBothLengths) {
  Model m = parse_model(kSir);
  m.initial_state.pop_back();
  try {
    validate_model(m);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("2 entries, expected 3"), std::string::npos) << e.what();
  }
}

TEST(ModelRoundTrip, FormatThenParseIsIdentity) {
  for (const char* text :
       {kSir, "species A=3 B=0 C=7\nparam k=0.25 h=2\nreaction 2 A + B -> C @ k*A^2*B/(h+C)\n"
              "reaction C -> 0 @ max(k, min(h, C))\nreaction -> A @ abs(h - 3) + 1e-3\n"}) {
    const Model m = parse_model(text);
    const Model again = parse_model(format_model(m));
    EXPECT_EQ(m, again) << format_model(m);
  }
}

TEST(EvalRate, MassActionProduct) {
  const Model m = parse_model(kSir);
  const std::vector<std::int64_t> state{99, 1, 0};
  const std::vector<double> params{0.12, 0.05};
  // 0.12 * 99 * 1 computed independently.
  EXPECT_NEAR(eval_rate(m.reactions[0].rate, state, params), 0.12 * 99.0, 1e-12);
  EXPECT_NEAR(eval_rate(m.reactions[0].rate, state, params), 11.88, 1e-12);
}

TEST(EvalRate, AbsorbingAndConstantRates) {
  const Model m = parse_model(kSir);
  EXPECT_EQ(eval_rate(m.reactions[1].rate, std::vector<std::int64_t>{99, 0, 1},
                      std::vector<double>{0.12, 0.05}),
            0.0);
  const Model poisson = parse_model("species N=0\nparam mu=2.5\nreaction -> N @ mu\n");
  for (std::int64_t n : {0, 7, 1000}) {
    EXPECT_EQ(eval_rate(poisson.reactions[0].rate, std::vector<std::int64_t>{n},
                        std::vector<double>{2.5}),
              2.5);
  }
}

TEST(EvalRate, ZeroStateZeroesMassAction) {
  const Model m = parse_model(kSir);
  const std::vector<double> params{0.3, 0.7};
  const std::vector<std::int64_t> zero{0, 0, 0};
  for (const auto& r : m.reactions) EXPECT_EQ(eval_rate(r.rate, zero, params), 0.0);
}

TEST(EvalRate, Errors) {
  const Model m =
      parse_model("species A=0\nparam k=1\nreaction A -> 0 @ k/A\nreaction -> A @ k - 2\n");
  const std::vector<double> params{1.0};
  EXPECT_THROW(eval_rate(m.reactions[0].rate, std::vector<std::int64_t>{0}, params), EvalError);
  EXPECT_THROW(eval_rate(m.reactions[1].rate, std::vector<std::int64_t>{0}, params), EvalError);
}

TEST(EvalRate, PureFunction) {
  const Model m = parse_model(kSir);
  const std::vector<std::int64_t> state{37, 12, 51};
  const std::vector<double> params{0.0123, 0.0456};
  const double a = eval_rate(m.reactions[0].rate, state, params);
  const double b = eval_rate(m.reactions[0].rate, state, params);
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(ModelLoad, MissingFileIsIoError) {
  EXPECT_THROW(load_model("/nonexistent/dir/x.model"), IoError);
}

TEST(ModelLoad, ShippedModelsParse) {
  for (const char* name : {"sir.model", "poisson.model", "lacz.model"}) {
    EXPECT_NO_THROW(load_model(std::string(SMOOTHCK_MODELS_DIR) + "/" + name)) << name;
  }
  EXPECT_EQ(load_model(std::string(SMOOTHCK_MODELS_DIR) + "/lacz.model").reactions.size(), 11u);
}

}  // namespace
}  // namespace smoothck
