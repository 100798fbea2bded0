#include <gtest/gtest.h>

#include <random>

#include "upade/io.hpp"
#include "upade/universal.hpp"

namespace {

using upade::Complex;
using upade::DiscSpec;
using upade::make_region;
using upade::PadeIndex;
using upade::PadeIndexFamily;
using upade::PointListSpec;
using upade::Polynomial;
using upade::SegmentSpec;

PadeIndexFamily family_from(std::vector<PadeIndex> witness) {
  PadeIndexFamily f;
  for (const auto& w : witness) f.members.insert(w);
  f.witness = std::move(witness);
  return f;
}

// Witness used throughout: one index per p in 5, 6, 10, 12, ..., preferring q = 2.
PadeIndexFamily standard_family() {
  PadeIndexFamily f;
  for (int p = 5; p <= 60; p += 5) f.members.insert({p, 1});
  for (int p = 6; p <= 60; p += 6) f.members.insert({p, 2});
  for (const auto& idx : f.members) {
    if (!f.witness.empty() && f.witness.back().p == idx.p)
      f.witness.back() = idx;
    else
      f.witness.push_back(idx);
  }
  return f;
}

upade::ScheduleGeometry small_geometry() {
  upade::ScheduleGeometry geo;
  geo.L = make_region(PointListSpec{{0.0}}, "L");
  geo.Lprime = make_region(DiscSpec{0.0, 0.5, 0.05}, "Lprime");
  return geo;
}

upade::SampledCompact segment_K(int n = 11) { return make_region(SegmentSpec{2.0, 3.0, n}, "K", true, true); }

// --- glue_target

TEST(GlueTarget, ValuesFollowTheirRegions) {
  const auto K = segment_K();
  const auto D = make_region(DiscSpec{0.0, 0.6, 0.1}, "D");
  const auto samples = upade::glue_target(Polynomial::constant(1.0), K, Polynomial(), D);
  ASSERT_EQ(samples.size(), K.points.size() + D.points.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const bool onK = i < K.points.size();
    EXPECT_EQ(samples[i].point, onK ? K.points[i] : D.points[i - K.points.size()]);
    EXPECT_EQ(samples[i].value, Complex(onK ? 1.0 : 0.0));
  }
}

TEST(GlueTarget, SameFunctionOnBothIsConstantExtension) {
  const Polynomial h({1.0, 2.0});
  const auto samples = upade::glue_target(h, segment_K(), h, make_region(DiscSpec{0.0, 0.6, 0.2}, "D"));
  for (const auto& s : samples) EXPECT_EQ(s.value, h(s.point));
}

TEST(GlueTarget, OverlapRejectedWithLabels) {
  const auto a = make_region(DiscSpec{0.0, 1.0, 0.1}, "A");
  const auto b = make_region(DiscSpec{0.5, 1.0, 0.1}, "B");
  try {
    (void)upade::glue_target(Polynomial(), a, Polynomial(), b);
    FAIL() << "expected RegionsOverlap";
  } catch (const upade::RegionsOverlap& e) {
    EXPECT_NE(std::string(e.what()).find("A"), std::string::npos);
  }
}

// --- fit_polynomial

TEST(FitPolynomial, RecoversPlantedCubic) {
  const Polynomial truth({1.0, {0.0, -2.0}, 0.5, 0.25});
  std::vector<upade::Sample> samples;
  for (const auto& z : make_region(DiscSpec{0.0, 1.0, 0.2}, "D").points) samples.push_back({z, truth(z)});
  const auto fit = upade::fit_polynomial(samples, 20, 1e-8);
  EXPECT_EQ(fit.fit_degree, 3);
  EXPECT_LT(fit.sup_error, 1e-8);
  for (int v = 0; v <= 3; ++v) EXPECT_NEAR(std::abs(fit.poly.coeff(v) - truth.coeff(v)), 0.0, 1e-8);
}

TEST(FitPolynomial, ConstantSamplesGiveDegreeZero) {
  std::vector<upade::Sample> samples;
  for (const auto& z : segment_K().points) samples.push_back({z, {2.0, 1.0}});
  const auto fit = upade::fit_polynomial(samples, 10, 1e-12);
  EXPECT_EQ(fit.fit_degree, 0);
  EXPECT_LT(fit.sup_error, 1e-14);
}

TEST(FitPolynomial, GluedOneAndZeroWithinDegreeSixty) {
  const auto samples = upade::glue_target(Polynomial::constant(1.0), segment_K(), Polynomial(),
                                          make_region(DiscSpec{0.0, 0.6, 0.05}, "D"));
  const auto fit = upade::fit_polynomial(samples, 60, 5e-3);
  RecordProperty("achieved_degree", fit.fit_degree);
  EXPECT_LE(fit.fit_degree, 60);
  EXPECT_LT(fit.sup_error, 5e-3);
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(fit.poly(s.point) - s.value));
  EXPECT_NEAR(worst, fit.sup_error, 1e-12);
}

TEST(FitPolynomial, UnreachableBudgetReportsBest) {
  const auto samples = upade::glue_target(Polynomial::constant(1.0), segment_K(), Polynomial(),
                                          make_region(DiscSpec{0.0, 0.6, 0.05}, "D"));
  try {
    (void)upade::fit_polynomial(samples, 3, 1e-6);
    FAIL() << "expected BudgetUnreachable";
  } catch (const upade::BudgetUnreachable& e) {
    EXPECT_GT(e.best_error(), 1e-6);
    EXPECT_LE(e.at_degree(), 3);
  }
}

TEST(FitPolynomial, InvalidInputs) {
  EXPECT_THROW(upade::fit_polynomial({}, 3, 1e-3), upade::InvalidArgument);
  EXPECT_THROW(upade::fit_polynomial({{0.0, 1.0}}, 3, 0.0), upade::InvalidArgument);
}

// --- choose_index

TEST(ChooseIndex, FirstWitnessBeyondDegree) {
  const auto f = family_from({{5, 1}, {10, 2}, {20, 3}});
  EXPECT_EQ(upade::choose_index(f, 7), (PadeIndex{10, 2}));
  EXPECT_EQ(upade::choose_index(f, 4), (PadeIndex{5, 1}));
  EXPECT_THROW(upade::choose_index(f, 25), upade::FamilyExhausted);
}

TEST(ChooseIndex, StrictlyGreater) { EXPECT_EQ(upade::choose_index(family_from({{5, 1}, {10, 2}}), 5), (PadeIndex{10, 2})); }

// --- perturb_and_certify

upade::StageRegions cubic_regions() {
  return {make_region(PointListSpec{{0.0, {0.1, 0.1}, {-0.2, 0.05}, {0.0, -0.25}}}, "L"),
          make_region(DiscSpec{0.0, 0.5, 0.05}, "Lprime"), segment_K(),
          make_region(DiscSpec{0.0, 0.7, 0.05}, "L''")};
}

TEST(PerturbAndCertify, CubicWithTenTwoIsExact) {
  const Polynomial P({0.5, -1.0, 0.25, 0.1});
  const auto rg = cubic_regions();
  const auto st = upade::perturb_and_certify(P, {10, 2}, rg, P, 100, 0.01, P);
  EXPECT_EQ(st.g.degree(), 10);
  EXPECT_NE(st.d_used, Complex{});
  const auto& c = st.certificate;
  EXPECT_TRUE(c.pass());
  EXPECT_TRUE(c.membership_ok);
  EXPECT_LT(c.err_on_Lprime, 1e-8);
  EXPECT_LT(c.exactness_sup, 1e-8);
  EXPECT_LT(c.route_agreement, 1e-8);
  // Independent check of exactness at every center, on every region.
  for (const auto& zeta : rg.L.points) {
    const auto r = upade::pade_linear_solve(upade::series_of(upade::recenter(st.g, zeta), 12), {10, 2});
    for (const auto* region : {&rg.L, &rg.Lprime, &rg.K, &rg.Ldoubleprime})
      EXPECT_LT(upade::sup_distance(r, st.g, *region), 1e-8) << region->label;
  }
  EXPECT_EQ(c.zeta_reports.size(), rg.L.points.size());
}

TEST(PerturbAndCertify, TriangleBudgetCoversError) {
  const Polynomial P({0.5, -1.0, 0.25, 0.1});
  const Polynomial h({0.5, -1.0, 0.25, 0.1 + 1e-4});
  const auto st = upade::perturb_and_certify(P, {10, 2}, cubic_regions(), h, 100, 0.01, P);
  const auto& c = st.certificate;
  EXPECT_GE(c.fit_error_on_K + c.perturbation_bound_on_K + c.route_discrepancy_on_K, c.err_on_K);
  EXPECT_GE(c.fit_error_on_Ldoubleprime + c.perturbation_bound_on_Ldoubleprime + 1e-15,
            c.err_vs_previous_on_Ldoubleprime);
}

TEST(PerturbAndCertify, ZeroPerturbationRejected) {
  EXPECT_THROW(upade::make_stage_function(Polynomial({1.0, 1.0}), 0.0, 5), upade::InvalidArgument);
  EXPECT_THROW(upade::make_stage_function(Polynomial({1.0, 1.0}), 1e-3, 1), upade::InvalidArgument);
  EXPECT_EQ(upade::make_stage_function(Polynomial({1.0, 1.0}), 1e-3, 5).degree(), 5);
}

TEST(PerturbAndCertify, IndexMustExceedDegree) {
  const Polynomial P({0.5, -1.0, 0.25, 0.1});
  EXPECT_THROW(upade::perturb_and_certify(P, {3, 1}, cubic_regions(), P, 100, 0.01, P), upade::InvalidArgument);
}

TEST(PerturbAndCertify, FailureCarriesCertificate) {
  // P is far from h on K, so err_on_K cannot drop below 1/s.
  const Polynomial P({0.5, -1.0, 0.25, 0.1});
  try {
    (void)upade::perturb_and_certify(P, {10, 2}, cubic_regions(), Polynomial(), 100, 0.01, P);
    FAIL() << "expected CertificationFailed";
  } catch (const upade::CertificationFailed& e) {
    EXPECT_FALSE(e.certificate().pass());
    EXPECT_GE(e.certificate().err_on_K, 0.01);
    EXPECT_EQ(e.context().region, "K");
    ASSERT_TRUE(e.context().index.has_value());
    EXPECT_EQ(*e.context().index, (PadeIndex{10, 2}));
  }
}

// --- run_schedule

TEST(RunSchedule, SingleDemandPasses) {
  const std::vector<upade::Demand> demands{{Polynomial::constant(1.0), segment_K(), 100}};
  const auto res = upade::run_schedule(demands, standard_family(), small_geometry(), Polynomial());
  ASSERT_EQ(res.stages.size(), 1u);
  const auto& st = res.stages[0];
  EXPECT_TRUE(st.certificate.pass());
  EXPECT_TRUE(res.all_pass());
  EXPECT_EQ(st.g.degree(), st.pq.p);
  EXPECT_GT(st.pq.p, st.fit_degree);
  EXPECT_LT(st.certificate.err_on_K, 0.01);
  EXPECT_LT(st.certificate.err_on_Lprime, 0.01);
  EXPECT_TRUE(standard_family().members.contains(st.pq));
}

TEST(RunSchedule, TwoDemandsStayCloseOnLdoubleprime) {
  const std::vector<upade::Demand> demands{{Polynomial::constant(1.0), segment_K(), 100},
                                           {Polynomial::monomial(1.0, 2), segment_K(), 100}};
  const auto res = upade::run_schedule(demands, standard_family(), small_geometry(), Polynomial());
  ASSERT_EQ(res.stages.size(), 2u);
  EXPECT_TRUE(res.all_pass());
  ASSERT_EQ(res.ldd.size(), 2u);
  EXPECT_GT(res.ldd[1].radius, res.ldd[0].radius);
  EXPECT_LT(res.ldd[1].radius, 1.0);
  const auto ldd1 = make_region(DiscSpec{res.ldd[0].center, res.ldd[0].radius, 0.02}, "L''_1");
  EXPECT_LT(upade::sup_difference(res.stages[1].g, res.stages[0].g, ldd1.points), res.eps[0]);
  EXPECT_GT(res.stages[1].pq.p, res.stages[0].pq.p - 1);
  ASSERT_EQ(res.telescope.size(), 1u);
  EXPECT_TRUE(res.telescope[0].ok());
  for (const auto& st : res.stages) EXPECT_EQ(st.g.degree(), st.pq.p);
}

TEST(RunSchedule, DefaultEpsilonsHalve) {
  const std::vector<upade::Demand> demands{{Polynomial::constant(1.0), segment_K(), 10},
                                           {Polynomial::constant(2.0), segment_K(), 10}};
  const auto res = upade::run_schedule(demands, standard_family(), small_geometry(), Polynomial());
  ASSERT_EQ(res.eps.size(), 2u);
  EXPECT_DOUBLE_EQ(res.eps[0], 0.01);
  EXPECT_DOUBLE_EQ(res.eps[1], 0.005);
}

TEST(RunSchedule, EmptyDemandListRejected) {
  EXPECT_THROW(upade::run_schedule({}, standard_family(), small_geometry(), Polynomial()), upade::InvalidArgument);
}

TEST(RunSchedule, KInsideOmegaRejected) {
  const std::vector<upade::Demand> demands{{Polynomial::constant(1.0), make_region(SegmentSpec{0.6, 0.9, 5}, "K", true, true), 10}};
  EXPECT_THROW(upade::run_schedule(demands, standard_family(), small_geometry(), Polynomial()), upade::InvalidArgument);
}

TEST(RunSchedule, TinyFamilyCapsFitDegree) {
  const std::vector<upade::Demand> demands{{Polynomial::constant(1.0), segment_K(), 100}};
  EXPECT_THROW(upade::run_schedule(demands, family_from({{2, 1}}), small_geometry(), Polynomial()),
               upade::BudgetUnreachable);
}

TEST(RunSchedule, UnreachableToleranceNamesStage) {
  const std::vector<upade::Demand> demands{{Polynomial::constant(1.0), segment_K(), 1000000}};
  try {
    (void)upade::run_schedule(demands, standard_family(), small_geometry(), Polynomial());
    FAIL() << "expected BudgetUnreachable";
  } catch (const upade::BudgetUnreachable& e) {
    EXPECT_NE(e.context().operation.find("stage 1"), std::string::npos);
  }
}

TEST(RunSchedule, Deterministic) {
  const std::vector<upade::Demand> demands{{Polynomial::constant(1.0), segment_K(), 100},
                                           {Polynomial::monomial(1.0, 2), segment_K(), 100}};
  const auto a = upade::run_schedule(demands, standard_family(), small_geometry(), Polynomial());
  const auto b = upade::run_schedule(demands, standard_family(), small_geometry(), Polynomial());
  EXPECT_EQ(upade::io::to_json(a).dump(), upade::io::to_json(b).dump());
}

}  // namespace
