#include <gtest/gtest.h>

#include <set>

#include "solitons/catalog.hpp"

using namespace solitons;

namespace {
bool imaginary_nls(const VerificationRow& r) {
  return r.type == "pde" && (r.family == "nls-kink" || r.family == "nls-tan" || r.family == "nls-sn");
}
}  // namespace

TEST(Catalog, FullMatrix) {
  const auto rows = verify_catalog();
  EXPECT_GE(rows.size(), 12u);
  std::set<std::string> families;
  for (const auto& r : rows) {
    families.insert(r.family);
    EXPECT_TRUE(r.error.empty()) << r.label << ": " << r.error;
    if (imaginary_nls(r)) {
      // Purely imaginary profiles solve the NLS only with the opposite sign of lambda.
      EXPECT_FALSE(r.pass) << r.label;
      EXPECT_LE(r.diagnostics["sup_norm_with_lambda"]["sup_norm"].get<double>(), 1e-6) << r.label;
      continue;
    }
    EXPECT_TRUE(r.pass) << r.label << " " << r.equation << " " << r.sup_norm;
    if (r.type == "pde") {
      ASSERT_TRUE(r.order.has_value());
      EXPECT_NEAR(*r.order, 4.0, 0.5) << r.label;
    }
  }
  EXPECT_GE(families.size(), 12u);
}

TEST(Catalog, ScopeAndDeterminism) {
  const auto kdv = verify_catalog("kdv");
  ASSERT_EQ(kdv.size(), 1u);
  EXPECT_TRUE(kdv[0].pass);
  EXPECT_EQ(kdv[0].family, "kdv-soliton");
  EXPECT_EQ(verify_catalog("kdv-soliton").size(), 2u);
  EXPECT_EQ(verify_catalog("sg-kink").size(), 5u);
  EXPECT_TRUE(verify_catalog("no-such-family").empty());
  const auto a = verify_catalog(), b = verify_catalog();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].to_json().dump(), b[i].to_json().dump());
}

TEST(Catalog, CorruptedAmplitudeDetected) {
  const auto rows = verify_catalog("kdv", 1.01);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].pass);
  for (const auto& r : verify_catalog("kdv-soliton", 1.01)) EXPECT_FALSE(r.pass) << r.equation;
}

TEST(Catalog, NotesCarryPrefactorRecords) {
  for (const auto& r : verify_catalog("gmkdv-kink")) {
    ASSERT_EQ(r.notes.size(), 1u);
    EXPECT_FALSE(r.notes[0]["nominal_verified"].get<bool>());
  }
  for (const auto& r : verify_catalog("gmkdv-sn")) EXPECT_TRUE(r.notes[0]["nominal_verified"].get<bool>());
}
