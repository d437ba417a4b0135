#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "recipro/catalog.hpp"
#include "recipro/dsl.hpp"
#include "recipro/error.hpp"
#include "support.hpp"

using namespace recipro;

namespace {

std::string sample(const std::string& name) {
  std::ifstream f(std::string(RECIPRO_SAMPLES_DIR) + "/" + name);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kHeader =
    "space s {\n"
    "  indep: x, y;\n"
    "  dep: u, v;\n"
    "  param: a;\n"
    "  order: 6\n"
    "}\n";

// random documents over the generator's space: systems, conserved blocks, a lax block and scenarios
std::string random_document(support::ExprGen& gen) {
  std::ostringstream os;
  os << kHeader;
  int systems = 1 + static_cast<int>(gen.pick(2));
  for (int k = 0; k < systems; ++k) {
    os << "system sys" << k << " in s {\n";
    int eqs = 1 + static_cast<int>(gen.pick(3));
    for (int i = 0; i < eqs; ++i)
      os << "  " << (gen.pick(4) == 0 ? "def" : "eq") << " e" << i << ": " << to_text(gen.rational(2)) << " = " << to_text(gen.polynomial(1))
         << ";\n";
    if (gen.pick(2)) os << "  priority: " << (gen.pick(2) ? "x, y" : "y, x") << ";\n";
    os << "}\n";
  }
  if (gen.pick(2)) {
    os << "conserved c on sys0 {\n  A: " << to_text(gen.polynomial(1)) << " on y;\n  B: " << to_text(gen.rational(1)) << " on x\n}\n";
  }
  os << "lax p on sys0 {\n  eigen: phi;\n";
  os << "  spatial s1: phi_{x,x} = " << to_text(gen.polynomial(1)) << "*phi;\n";
  os << "  temporal t1: phi_y = " << to_text(gen.polynomial(1)) << "*phi_x;\n}\n";
  os << "scenario sc {\n  command: lax-check;\n  target: p;\n  expect: " << (gen.pick(2) ? "holds" : "fails") << "\n}\n";
  return os.str();
}

}  // namespace

TEST(Parse, EmptyDocument) {
  EXPECT_TRUE(dsl::parse_document("").empty());
  EXPECT_TRUE(dsl::parse_document("  # only a comment\n\n").empty());
  EXPECT_EQ(dsl::render(dsl::Document{}), dsl::render(dsl::parse_document("")));
}

TEST(Parse, DanglingOperator) {
  std::string text = std::string(kHeader) + "system t in s {\n  eq e: u_x + = v\n}\n";
  try {
    dsl::parse_document(text);
    FAIL() << "no error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 8);
    EXPECT_EQ(e.column(), 13);
  }
}

TEST(Parse, NameErrors) {
  EXPECT_THROW(dsl::parse_document("system t in nowhere { eq e: u = 0 }"), UnknownName);
  EXPECT_THROW(dsl::parse_document(std::string(kHeader) + kHeader), DuplicateName);
  EXPECT_THROW(dsl::parse_document(std::string(kHeader) + "system t in s { eq e: w_x = 0 }"), UnknownName);
  EXPECT_THROW(dsl::parse_document(std::string(kHeader) + "system t in s { eq e: u_z = 0 }"), UnknownName);
}

TEST(Parse, DiagnosticsRecover) {
  std::string text = std::string(kHeader) +
                     "system bad1 in s { eq e: u_x + = v }\n"
                     "system good in s { eq e: u_x = v }\n"
                     "system bad2 in s { eq e: (u_x = v }\n";
  auto [doc, diags] = dsl::parse_with_diagnostics(text);
  ASSERT_EQ(diags.size(), 2u);
  EXPECT_EQ(diags[0].line, 7);
  EXPECT_EQ(diags[1].line, 9);
  EXPECT_EQ(diags[0].kind, "SyntaxError");
  EXPECT_TRUE(doc.has("good"));
  EXPECT_FALSE(doc.has("bad1"));
  EXPECT_THROW(dsl::parse_document(text), SyntaxError);
}

TEST(Sample, ChhFirstMemberMatchesCatalog) {
  dsl::Document doc = dsl::parse_document(sample("chh1.rcp"));
  EXPECT_TRUE(systems_equivalent(doc.system("chh1"), catalog::chh(1)).holds);
  ReciprocalTransform t = doc.transform("reciprocal");
  EXPECT_EQ(t.data().relations, catalog::chh_transform(1).data().relations);
  EXPECT_TRUE(verify_conserved(doc.conserved_pair("density"), solve_leading(doc.system("chh1"))).holds);
  EXPECT_TRUE(verify_yields(doc.lax("spectral"), doc.lax_system("spectral")).holds);
  EXPECT_EQ(doc.scenarios.size(), 3u);
  EXPECT_EQ(doc.scenario_block("lax").get("command"), "lax-check");
}

TEST(Render, SampleRoundTrip) {
  dsl::Document doc = dsl::parse_document(sample("chh1.rcp"));
  EXPECT_EQ(dsl::parse_document(dsl::render(doc)), doc);
}

TEST(Render, RandomDocumentsRoundTrip) {
  support::ExprGen gen(61);
  for (int i = 0; i < 100; ++i) {
    std::string text = random_document(gen);
    dsl::Document doc = dsl::parse_document(text);
    std::string once = dsl::render(doc);
    dsl::Document again = dsl::parse_document(once);
    ASSERT_EQ(again, doc) << text << "\n---\n" << once;
    ASSERT_EQ(dsl::render(again), once);
  }
}
