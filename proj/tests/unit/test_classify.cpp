#include <cmath>

#include <gtest/gtest.h>

#include "pdeid/classify.hpp"

using namespace pdeid;

namespace {

struct Noisy {
  Field field;
  double epsilon = 0.0;
};

Noisy noisy(FunctionId id, double alpha, std::uint64_t seed = 1) {
  const Field clean = sample({id, 0.5, 1.0}, GridSpec::standard());
  const auto model = NoiseModel::calibrate(clean, alpha, seed);
  return {add_noise(clean, model), model.epsilon};
}

AnalysisResult run(FunctionId id, double alpha, std::uint64_t seed = 1, int fd_order = 8) {
  const auto data = noisy(id, alpha, seed);
  AnalysisRequest req;
  req.pde_class = TestFunction{id, 0.5, 1.0}.pde_class();
  req.method = default_method(req.pde_class);
  req.fd_order = fd_order;
  req.noise_epsilon = data.epsilon;
  return analyze(data.field, req);
}

FeatureMatrix matrix(const Eigen::MatrixXd& values, double eps_G) {
  FeatureMatrix gm;
  gm.values = values;
  gm.eps_G = eps_G;
  return gm;
}

JacobianStack stack(const std::vector<Eigen::MatrixX2d>& mats, double eps_JG) {
  JacobianStack js;
  js.matrices = mats;
  js.eps_JG = eps_JG;
  for (std::size_t q = 0; q < mats.size(); ++q) js.points.push_back({q, 0, 1.0, 1.0});
  return js;
}

Eigen::MatrixX2d mat2(double a, double b, double c, double d) {
  Eigen::MatrixX2d m(2, 2);
  m << a, b, c, d;
  return m;
}

} // namespace

TEST(Classify, Names) {
  for (Label l : {Label::Unique, Label::NonUnique, Label::Inconclusive}) EXPECT_EQ(parse_label(to_string(l)), l);
  for (Method m : {Method::Franco, Method::Jrc}) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("svd"), std::invalid_argument);
  EXPECT_EQ(default_method(PdeClass::Linear), Method::Franco);
  EXPECT_EQ(default_method(PdeClass::Algebraic), Method::Jrc);
  EXPECT_EQ(default_method(PdeClass::Analytic), Method::Jrc);
}

TEST(Classify, ThresholdConstantRules) {
  ConstantPolicy p;
  SvResult sv{{10.0, 1e-9}, 1e-10};
  auto c = threshold_constants(sv, p);
  EXPECT_DOUBLE_EQ(c.c_n, 1e-3);
  EXPECT_DOUBLE_EQ(c.c1_low, 5.0);
  EXPECT_DOUBLE_EQ(c.c1_up, 15.0);
  sv = {{10.0, 8.0}, 0.8};
  EXPECT_DOUBLE_EQ(threshold_constants(sv, p).c_n, 4.0);
}

TEST(Classify, PolicyValidation) {
  ConstantPolicy p;
  EXPECT_NO_THROW(p.validate());
  p.c1_low_factor = 1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.C = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.fallback_c_u = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Classify, ConstantFieldHasZeroCu) {
  const GridSpec g = GridSpec::standard();
  Field f{g, {}, Eigen::MatrixXd::Constant(64, 64, 3.0)};
  const auto est = estimate_c_u(f, 2, 8, {});
  EXPECT_EQ(est.c_u, 0.0);
  EXPECT_FALSE(est.fallback);
}

TEST(Classify, CuFallbackOnSmallGrid) {
  const Field f = sample({FunctionId::LinExp, 0.5, 1.0}, GridSpec::over(1, 2, 10, 1, 2, 10));
  EXPECT_THROW(estimate_c_u(f, 1, 8, {}), GridError);
  ConstantPolicy p;
  p.fallback_c_u = 7.0;
  const auto est = estimate_c_u(f, 1, 8, p);
  EXPECT_TRUE(est.fallback);
  EXPECT_EQ(est.c_u, 7.0);
}

TEST(Classify, DecideRules) {
  std::vector<std::string> flags;
  EXPECT_EQ(decide(0.5, 0.1, 0.01, flags), Label::Unique);
  EXPECT_EQ(decide(1e-4, 0.1, 0.01, flags), Label::NonUnique);
  EXPECT_EQ(decide(0.05, 0.1, 0.01, flags), Label::Inconclusive);
  EXPECT_TRUE(flags.empty());
  EXPECT_EQ(decide(0.05, 0.01, 0.1, flags), Label::Inconclusive);
  EXPECT_EQ(flags, std::vector<std::string>{"contradiction"});
  flags.clear();
  EXPECT_EQ(decide(0.5, std::nullopt, std::nullopt, flags), Label::Inconclusive);
  EXPECT_EQ(flags, (std::vector<std::string>{"t_nonunique-invalid", "t_unique-invalid"}));
  flags.clear();
  EXPECT_EQ(decide(0.5, std::nullopt, 0.1, flags), Label::Inconclusive);
  EXPECT_EQ(decide(1e-3, std::nullopt, 0.1, flags), Label::NonUnique);
}

TEST(Classify, FrancoWithExplicitConstants) {
  Eigen::MatrixXd g(4, 2);
  g << 1, 0, 0, 1, 0, 0, 0, 0;
  const ThresholdConstants c{0.5, 1.5, 0.5};
  auto v = nr_franco(matrix(g, 0.01), c);
  EXPECT_EQ(v.label, Label::Unique);
  ASSERT_EQ(v.rho_values.size(), 1u);
  EXPECT_NEAR(v.rho_values[0], 1.0, 1e-15);
  EXPECT_EQ(v.witness_count, 1u);

  Eigen::MatrixXd r1(4, 2);
  r1 << 1, 2, 2, 4, 3, 6, 4, 8;
  v = nr_franco(matrix(r1, 0.01), c);
  EXPECT_EQ(v.label, Label::NonUnique);

  // thresholds overlap: r sits above T_nu and below T_u
  Eigen::MatrixXd mid(3, 2);
  mid << 1, 0, 0, 0.5, 0, 0;
  v = nr_franco(matrix(mid, 0.1), ThresholdConstants{1.0, 1.0, 1.0});
  EXPECT_EQ(v.label, Label::Inconclusive);
  EXPECT_TRUE(v.has_flag("contradiction"));

  EXPECT_THROW(nr_franco(matrix(Eigen::MatrixXd::Zero(4, 2), 0.0), c), std::invalid_argument);
  EXPECT_THROW(nr_franco(matrix(Eigen::MatrixXd::Ones(2, 2), 0.0), c), std::invalid_argument);
}

TEST(Classify, FrancoReferenceCases) {
  EXPECT_EQ(run(FunctionId::LinExp, 0.0).verdict.label, Label::NonUnique);
  const auto high = run(FunctionId::LinExp, 1e-1);
  EXPECT_EQ(high.verdict.label, Label::Inconclusive);
  EXPECT_FALSE(high.verdict.t_nonunique_summary().has_value());
}

// Noise-robust uniqueness of the travelling cosine at a moderate noise level.
TEST(Classify, FrancoCosineUniqueAtModerateNoise) {
  const auto r = run(FunctionId::LinCos, 1e-3);
  EXPECT_EQ(r.verdict.label, Label::Unique) << "rho " << r.verdict.rho_max() << " eps_G " << r.eps_budget;
}

TEST(Classify, FrancoResultCarriesDiagnostics) {
  const auto r = run(FunctionId::LinCos, 1e-6);
  EXPECT_EQ(r.verdict.label, Label::Unique);
  ASSERT_TRUE(r.sv.has_value());
  ASSERT_TRUE(r.constants.has_value());
  EXPECT_EQ(r.sv->rho, r.verdict.rho_max());
  EXPECT_GT(r.epsilon, 0.0);
  EXPECT_GT(r.eps_budget, r.epsilon);
  EXPECT_GT(r.bounds.c_u, 0.0);
}

TEST(Classify, JrcReferenceCases) {
  const auto inv = run(FunctionId::AlgInv, 0.0);
  EXPECT_EQ(inv.verdict.label, Label::NonUnique);
  EXPECT_EQ(inv.verdict.witness_count, 56u * 56u);
  EXPECT_FALSE(inv.sv.has_value());
  EXPECT_EQ(run(FunctionId::AnaArccos, 1e-7).verdict.label, Label::Unique);
  EXPECT_NE(run(FunctionId::AlgInv, 1e-8).verdict.label, Label::Unique);
}

TEST(Classify, JrcDecisionRules) {
  ConstantPolicy p;
  const auto singular = mat2(1, 2, 2, 4);
  const auto regular = mat2(1, 0, 0, 1);
  auto v = nr_jrc(stack({singular, singular, regular}, 1e-6), p, PdeClass::Algebraic);
  EXPECT_EQ(v.label, Label::Unique);
  EXPECT_EQ(v.witnesses, std::vector<std::size_t>{2});
  EXPECT_EQ(v.rho_values.size(), 3u);

  v = nr_jrc(stack({singular, singular}, 1e-6), p, PdeClass::Algebraic);
  EXPECT_EQ(v.label, Label::NonUnique);
  EXPECT_EQ(v.witness_count, 2u);

  v = nr_jrc(stack({singular, singular}, 1e-6), p, PdeClass::Analytic);
  EXPECT_EQ(v.label, Label::Inconclusive);
  EXPECT_TRUE(v.has_flag("analytic-one-direction"));

  v = nr_jrc(stack({singular, Eigen::MatrixX2d::Zero(2, 2)}, 1e-6), p, PdeClass::Algebraic);
  EXPECT_EQ(v.label, Label::NonUnique);
  EXPECT_TRUE(v.has_flag("zero-jacobian-skipped"));
  ASSERT_EQ(v.rho_values.size(), 2u);
  EXPECT_FALSE(v.t_nonunique[1].has_value());
  EXPECT_FALSE(v.t_unique[1].has_value());

  v = nr_jrc(stack({Eigen::MatrixX2d::Zero(2, 2)}, 1e-6), p, PdeClass::Algebraic);
  EXPECT_EQ(v.label, Label::Inconclusive);
  EXPECT_TRUE(v.has_flag("no-valid-points"));

  // the regular point sits below its T_nu and has no valid T_u
  v = nr_jrc(stack({singular, mat2(1, 0, 0, 0.1)}, 0.1), p, PdeClass::Algebraic);
  EXPECT_EQ(v.label, Label::Inconclusive);
}

TEST(Classify, JrcWitnessesAreCapped) {
  std::vector<Eigen::MatrixX2d> mats(100, mat2(1, 0, 0, 1));
  const auto v = nr_jrc(stack(mats, 1e-6), {}, PdeClass::Analytic);
  EXPECT_EQ(v.label, Label::Unique);
  EXPECT_EQ(v.witness_count, 100u);
  EXPECT_EQ(v.witnesses.size(), kMaxWitnesses);
}

TEST(Classify, LargerBudgetNeverCreatesADefiniteVerdict) {
  for (FunctionId id : {FunctionId::LinExp, FunctionId::LinCos, FunctionId::LinAffineExp}) {
    const auto data = noisy(id, 1e-6);
    const auto gm0 = build_feature_matrix(data.field, FeatureSpec::value_and_ux(), 8, data.epsilon, {1.0, 1.0});
    bool inconclusive = false;
    for (double scale = 1.0; scale < 1e14; scale *= 10.0) {
      FeatureMatrix gm = gm0;
      gm.eps_G = gm0.eps_G * scale;
      const Label l = nr_franco(gm, ConstantPolicy{}).label;
      if (inconclusive) {
        EXPECT_EQ(l, Label::Inconclusive) << to_string(id) << " scale " << scale;
      }
      inconclusive = inconclusive || l == Label::Inconclusive;
    }
    EXPECT_TRUE(inconclusive) << to_string(id);
  }
}

TEST(Classify, FrancoLabelInvariantUnderRescaling) {
  for (auto [id, alpha] : {std::pair{FunctionId::LinExp, 0.0}, {FunctionId::LinExp, 1e-8},
                           {FunctionId::LinCos, 1e-5}, {FunctionId::LinAffineExp, 1e-1}}) {
    const auto data = noisy(id, alpha, 3);
    AnalysisRequest req;
    req.noise_epsilon = data.epsilon;
    const Label base = analyze(data.field, req).verdict.label;
    for (double c : {1e-3, 1e3}) {
      Field scaled = data.field;
      scaled.values *= c;
      AnalysisRequest rs = req;
      rs.noise_epsilon = c * data.epsilon;
      EXPECT_EQ(analyze(scaled, rs).verdict.label, base) << to_string(id) << " alpha " << alpha << " c " << c;
    }
  }
}

TEST(Classify, LinearFunctionsUnderJrcAreAlgebraic) {
  const auto data = noisy(FunctionId::LinExp, 0.0);
  AnalysisRequest req;
  req.method = Method::Jrc;
  req.pde_class = PdeClass::Linear;
  req.noise_epsilon = data.epsilon;
  EXPECT_EQ(analyze(data.field, req).verdict.label, Label::NonUnique);
}

TEST(Classify, AnalyzeValidatesRequest) {
  const auto data = noisy(FunctionId::LinExp, 0.0);
  AnalysisRequest req;
  req.fd_order = 3;
  EXPECT_THROW(analyze(data.field, req), std::invalid_argument);
  req = {};
  req.noise_epsilon = -1.0;
  EXPECT_THROW(analyze(data.field, req), std::invalid_argument);
}
