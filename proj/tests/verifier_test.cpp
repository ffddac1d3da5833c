#include <gtest/gtest.h>

#include <json.hpp>
#include <string>
#include <vector>

#include "srclab/catalog.hpp"
#include "srclab/report_json.hpp"
#include "srclab/spec_format.hpp"
#include "srclab/verifier.hpp"

using namespace srclab;

namespace {

const char* kFlat4 = R"(manifold flat4
dim 4
hdim 3
coords x y z w
hframe
  X1 = dx
  X2 = dy
  X3 = dz
vframe
  V = dw
metric identity
)";

OneFormData h2_pi() { return OneFormData::constant(std::vector<double>{1.0, 0.0, 0.0, 0.0}); }

}  // namespace

TEST(CheckTable, IdsAreUniqueAndOrdered) {
  const auto& t = check_table();
  ASSERT_EQ(t.size(), 18u);
  for (std::size_t i = 0; i < t.size(); ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "C%02zu", i + 1);
    EXPECT_EQ(t[i].id, id);
    EXPECT_GT(t[i].tolerance, 0.0);
    EXPECT_FALSE(t[i].paper_ref.empty());
  }
}

TEST(RunSuite, HeisenbergOneSkipsRankThreeChecks) {
  const Report r = run_suite(builtin("heisenberg1").spec, std::nullopt, SuiteConfig{20, 1, 1e-9});
  for (const char* id : {"C01", "C02", "C18"}) EXPECT_TRUE(r.check(id).pass) << id;
  for (const char* id : {"C09", "C10", "C12", "C15"}) {
    ASSERT_TRUE(r.check(id).skipped_reason.has_value()) << id;
    EXPECT_NE(r.check(id).skipped_reason->find("RankTooSmall"), std::string::npos);
  }
  EXPECT_TRUE(r.all_pass());
  for (const auto& c : r.checks)
    if (!c.skipped_reason) EXPECT_EQ(c.points_evaluated, 20) << c.id;
}

// Everything except the displayed conformal difference formula holds on H^2
// with pi = (1,0,0,0). That formula predicts a non-zero Cbar - C although
// the second trace, and with it C, does not move.
TEST(RunSuite, HeisenbergTwoWithConstantPi) {
  const Report r = run_suite(builtin("heisenberg2").spec, h2_pi(), SuiteConfig{20, 42, 1e-9});
  for (const auto& c : r.checks) {
    EXPECT_FALSE(c.skipped_reason.has_value()) << c.id;
    if (c.id == "C10") continue;
    EXPECT_TRUE(c.pass) << c.id << " " << c.max_rel_residual;
  }
  EXPECT_LE(r.check("C08").max_abs_residual, 1e-10);
  EXPECT_FALSE(r.check("C10").pass);
  EXPECT_GT(r.check("C10").max_abs_residual, 0.1);
}

TEST(RunSuite, FlatIsExact) {
  for (const ManifoldSpec& s : {builtin("flat3").spec, parse_manifold(kFlat4)}) {
    const Report r = run_suite(s, std::nullopt, SuiteConfig{10, 3, 1e-9});
    for (const auto& c : r.checks) {
      if (c.skipped_reason) continue;
      EXPECT_LE(c.max_abs_residual, 1e-15) << s.name << " " << c.id;
    }
  }
}

TEST(RunSuite, CatalogAnnotationsHoldUnderDefaults) {
  for (const auto& name : builtin_names()) {
    const CatalogEntry e = builtin(name);
    const Report r = run_suite(e.spec, std::nullopt, SuiteConfig{});
    for (const auto& c : r.checks) {
      if (e.expected_skips.count(c.id)) {
        EXPECT_TRUE(c.skipped_reason.has_value()) << name << " " << c.id;
      } else {
        EXPECT_TRUE(c.pass) << name << " " << c.id << " " << c.max_rel_residual;
      }
    }
  }
}

TEST(RunSuite, Deterministic) {
  const CatalogEntry e = builtin("curved-metric-l3");
  const Report a = run_suite(e.spec, e.oneforms[2].pi, SuiteConfig{8, 99, 1e-9});
  const Report b = run_suite(e.spec, e.oneforms[2].pi, SuiteConfig{8, 99, 1e-9});
  EXPECT_EQ(to_json(a, "t"), to_json(b, "t"));
  const Report c = run_suite(e.spec, e.oneforms[2].pi, SuiteConfig{8, 100, 1e-9});
  EXPECT_NE(to_json(a, "t"), to_json(c, "t"));
}

// Samples for a larger count extend the smaller one, so residual maxima can
// only grow and a failing check cannot start passing.
TEST(RunSuite, MonotoneInPointCount) {
  const CatalogEntry e = builtin("involutive-l3");
  const auto small = sample_points(e.spec, 5, 7), large = sample_points(e.spec, 15, 7);
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i], large[i]);
  const Report a = run_suite(e.spec, e.oneforms[1].pi, SuiteConfig{5, 7, 1e-9});
  const Report b = run_suite(e.spec, e.oneforms[1].pi, SuiteConfig{15, 7, 1e-9});
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    if (a.checks[i].skipped_reason) continue;
    EXPECT_GE(b.checks[i].max_rel_residual, a.checks[i].max_rel_residual) << a.checks[i].id;
    if (!a.checks[i].pass) EXPECT_FALSE(b.checks[i].pass);
  }
}

TEST(RunSuite, EvaluationErrorsFailChecksWithoutAborting) {
  ManifoldSpec s = builtin("heisenberg1").spec;
  s.metric[0][0] = parse_expression("x", s.coords);
  const Report r = run_suite(s, std::nullopt, SuiteConfig{10, 1, 1e-9});
  EXPECT_FALSE(r.all_pass());
  EXPECT_FALSE(r.check("C01").pass);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("positive definite"), std::string::npos) << r.warnings.front();
}

TEST(RunSuite, ConditionWarning) {
  ManifoldSpec s = builtin("flat3").spec;
  s.hframe[1] = parse_vector_field("1e-10 dy", s.coords);
  const Report r = run_suite(s, std::nullopt, SuiteConfig{3, 1, 1e-9});
  bool found = false;
  for (const auto& w : r.warnings) found = found || w.find("condition") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(TunedOneForm, HitsTargetCharacteristicTensor) {
  for (const char* name : {"curved-metric-l3", "involutive-l3", "heisenberg1"}) {
    const ManifoldSpec s = builtin(name).spec;
    const int ell = s.ell;
    for (const auto& p : sample_points(s, 4, 12)) {
      const ConnectionJets nabla = koszul_connection(s).evaluate(p, 1);
      Matrix target({ell, ell});
      for (int i = 0; i < ell; ++i)
        for (int k = 0; k < ell; ++k) target(i, k) = 0.3 * i - 0.7 * k + 0.1 * i * k;
      const std::vector<double> v(ell, 0.25);
      const OneFormData pi = tuned_oneform(nabla, v, target);
      const CharacteristicTensor t = characteristic_tensor(s, pi, p);
      EXPECT_LE(max_abs_diff(t.pi_lower, target), 1e-12) << name;
    }
  }
}

TEST(GroupManifold, Verdicts) {
  for (const char* name : {"heisenberg1", "heisenberg2", "free-step2-l3", "flat3"}) {
    EXPECT_EQ(check_group_manifold(builtin(name).spec, std::nullopt, SuiteConfig{}).verdict,
              GroupVerdict::kHoldsAtSamples)
        << name;
  }
  const GroupManifoldResult h2 = check_group_manifold(builtin("heisenberg2").spec, h2_pi(), SuiteConfig{});
  EXPECT_EQ(h2.verdict, GroupVerdict::kFails);
  EXPECT_EQ(h2.connection, ConnectionKind::kSemiSubRiemannian);
  EXPECT_NEAR(h2.max_curvature, 1.0, 1e-12);
  EXPECT_EQ(check_group_manifold(builtin("curved-metric-l3").spec, std::nullopt, SuiteConfig{}).verdict,
            GroupVerdict::kFails);
}

TEST(FlatnessCriterion, Examples) {
  const FlatnessResult h2 = check_flatness_criterion(builtin("heisenberg2").spec, h2_pi(), SuiteConfig{5, 1, 1e-9});
  EXPECT_TRUE(h2.verdict);
  for (const auto& r : h2.records) {
    EXPECT_FALSE(r.r_zero);
    EXPECT_TRUE(r.s_zero);
    EXPECT_FALSE(r.pi_matches);
  }
  const FlatnessResult flat = check_flatness_criterion(parse_manifold(kFlat4), std::nullopt, SuiteConfig{5, 1, 1e-9});
  EXPECT_TRUE(flat.verdict);
  for (const auto& r : flat.records) EXPECT_TRUE(r.r_zero && r.s_zero && r.pi_matches);
  const CatalogEntry c = builtin("curved-metric-l3");
  const FlatnessResult curved = check_flatness_criterion(c.spec, c.oneforms[2].pi, SuiteConfig{5, 1, 1e-9});
  EXPECT_TRUE(curved.verdict);
  for (const auto& r : curved.records) EXPECT_FALSE(r.r_zero || r.s_zero || r.pi_matches);
  EXPECT_THROW(check_flatness_criterion(builtin("flat3").spec, std::nullopt, SuiteConfig{}), RankTooSmall);
}

TEST(ReportJson, SchemaAndFieldOrder) {
  const Report r = run_suite(builtin("heisenberg1").spec, std::nullopt, SuiteConfig{4, 5, 1e-9});
  const std::string text = to_json(r, "2026-01-01T00:00:00Z");
  const auto j = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "manifold", "seed", "points", "jet_order", "checks",
                                            "warnings", "timestamp"}));
  EXPECT_EQ(j["manifold"], "heisenberg1");
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["points"], 4);
  ASSERT_EQ(j["checks"].size(), 18u);
  const std::vector<std::string> check_keys = {"id", "description", "paper_ref", "max_abs_residual",
                                               "max_rel_residual", "tolerance", "pass", "skipped_reason"};
  for (const auto& c : j["checks"]) {
    std::vector<std::string> k;
    for (auto it = c.begin(); it != c.end(); ++it) k.push_back(it.key());
    EXPECT_EQ(k, check_keys);
    if (c["skipped_reason"].is_null()) {
      EXPECT_TRUE(c["max_rel_residual"].is_number());
      EXPECT_EQ(c["pass"].get<bool>(), c["max_rel_residual"].get<double>() <= c["tolerance"].get<double>());
    } else {
      EXPECT_TRUE(c["max_rel_residual"].is_null());
      EXPECT_FALSE(c["pass"].get<bool>());
    }
  }
}

TEST(ReportJson, NumbersRoundTrip) {
  Report r;
  r.manifold = "q\"uote\n";
  CheckRecord c;
  c.id = "C01";
  c.max_abs_residual = 0.1 + 0.2;
  c.max_rel_residual = 1.0 / 3.0;
  r.checks.push_back(c);
  const auto j = nlohmann::json::parse(to_json(r, "t"));
  EXPECT_EQ(j["manifold"], "q\"uote\n");
  EXPECT_EQ(j["checks"][0]["max_abs_residual"].get<double>(), 0.1 + 0.2);
  EXPECT_EQ(j["checks"][0]["max_rel_residual"].get<double>(), 1.0 / 3.0);
}
