#include <numbers>

#include "doctest.h"
#include "outerfact/error.hpp"
#include "support.hpp"

using namespace outerfact;
using namespace testing_support;

namespace {
const Tolerances kTol;

// Violation of the negative case, frozen from the first verified run.
constexpr double kNegativeViolation = 0.24705513002527;
// Largest tested inverse entry for the negative case, frozen likewise.
constexpr double kNegativeGwEntry = 0.25288844214381;

// Largest coefficient distance between p and q up to a common unimodular phase.
double phase_distance(const AnalyticPoly& p, const AnalyticPoly& q) {
  const Complex p0 = p.coeff({0, 0})(0, 0);
  const Complex q0 = q.coeff({0, 0})(0, 0);
  const Complex phase = std::abs(p0) > 0 ? q0 / p0 / std::abs(q0 / p0) : 1.0;
  double worst = 0.0;
  for (const auto& k : box_points(q.degree()))
    worst = std::max(worst, std::abs(phase * p.coeff(k)(0, 0) - q.coeff(k)(0, 0)));
  return worst;
}
}  // namespace

TEST_CASE("no degree-(1,1) square of the negative case exists") {
  CHECK_FALSE(single_square_exists_by_cases());
  std::mt19937_64 rng(2024);
  CHECK(single_square_search(rng, 40) > 1e-2);
  // The residual system does vanish at a genuine square.
  const auto r = single_square_residuals(2.0, 0.5, 0.5, 0.0);
  CHECK(std::abs(r[3]) == 0.0);
}

TEST_CASE("multi condition on constant symbols") {
  const ComplexMatrix q0 = mat(2, 2, {2.0, 0.5, 0.5, 1.0});
  const MultiConditionReport c = check_multi_condition(LaurentPoly::constant(2, q0), kTol);
  CHECK(c.passed);
  CHECK(c.rank_y == 2);
  CHECK((c.y.matrix() - q0).norm() < 1e-12);
  const Factor2dResult f = factor_outer_2d(LaurentPoly::constant(2, q0), kTol);
  REQUIRE(f.factor.has_value());
  CHECK((f.factor->p.coeff({0, 0}) - psd_sqrt(q0)).norm() < 1e-10);
}

TEST_CASE("multi condition: positive case") {
  const MultiConditionReport c = check_multi_condition(positive_case(), kTol);
  CHECK(c.passed);
  CHECK(c.converged);
  CHECK(c.rank_y == 1);
  CHECK(c.max_violation <= 1e-6);
  CHECK(c.coherence_gap <= 1e-8);
  CHECK(c.violation.size() == 9);

  const Factor2dResult f = factor_outer_2d(positive_case(), kTol);
  REQUIRE(f.factor.has_value());
  CHECK(phase_distance(f.factor->p, analytic2(4.0, 1.0, 1.0)) < 1e-6);
  CHECK(f.factor->certificates.residual <= 1e-6);
  CHECK(residual(positive_case(), f.factor->p, 64) <= 1e-6);
}

TEST_CASE("multi condition: negative case") {
  const MultiConditionReport c = check_multi_condition(negative_case(), kTol);
  CHECK(c.converged);
  CHECK_FALSE(c.passed);
  CHECK(c.max_violation >= 10 * kTol.residual_tol);
  CHECK(c.max_violation == doctest::Approx(kNegativeViolation).epsilon(1e-7));
  const Factor2dResult f = factor_outer_2d(negative_case(), kTol);
  CHECK_FALSE(f.factor.has_value());
}

TEST_CASE("diagonal sums reproduce Z^* Y Z on the torus") {
  const MultiConditionReport c = check_multi_condition(negative_case(), kTol);
  const CoeffMap sums = diagonal_sums(c.y.matrix(), c.degree, 1);
  const auto box = box_points(c.degree);
  const TorusGrid grid(2, 64);
  double worst = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto z = grid.point(g);
    ComplexMatrix zk(static_cast<Index>(box.size()), 1);
    for (std::size_t i = 0; i < box.size(); ++i)
      zk(static_cast<Index>(i), 0) = monomial(z, difference(c.degree, box[i]));
    const Complex lhs = (zk.adjoint() * c.y.matrix() * zk)(0, 0);
    worst = std::max(worst, std::abs(lhs - eval(negative_case(), z)(0, 0)));
  }
  CHECK(worst <= static_cast<double>(sums.size()) * c.max_violation + 1e-12);
  CHECK(worst > 0.0);
}

TEST_CASE("random stable polynomials pass every two-variable test") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex a = std::polar(0.9 * std::abs(u(rng)), std::numbers::pi * u(rng));
    const Complex b = std::polar(0.9 * std::abs(u(rng)), std::numbers::pi * u(rng));
    const double c = std::abs(a) + std::abs(b) + 0.5 + std::abs(u(rng));
    const AnalyticPoly p = analytic2(c, a, b);
    const LaurentPoly q = LaurentPoly::square_of(p);
    const Factor2dResult f = factor_outer_2d(q, kTol);
    CHECK(f.condition.passed);
    REQUIRE(f.factor.has_value());
    CHECK(phase_distance(f.factor->p, p) < 1e-6);
    CHECK(f.factor->certificates.residual <= 1e-6);
    CHECK(check_gw_stability(q, kTol).stable_factorable);
  }
}

TEST_CASE("Y0 assembly for degree (1,1)") {
  const LaurentPoly q = positive_case();
  const ComplexMatrix y0 = assemble_y0(q);
  // Order (0,0), (0,1), (1,0), (1,1).
  auto c = [&](int a, int b) { return q.coeff({a, b})(0, 0); };
  const ComplexMatrix expect = mat(4, 4, {c(0, 0),  c(0, -1),  c(-1, 0), c(-1, -1),
                                          c(0, 1),  0.0,       c(-1, 1), 0.0,
                                          c(1, 0),  c(1, -1),  0.0,      0.0,
                                          c(1, 1),  0.0,       0.0,      0.0});
  CHECK((y0 - expect).norm() == 0.0);
}

TEST_CASE("shift on a box") {
  const ComplexMatrix x = ComplexMatrix::Identity(4, 4);
  const ComplexMatrix s = shift_on_box(x, {1, 1}, 0, 1);
  // (0,0)->(1,0) and (0,1)->(1,1).
  CHECK(s(2, 2) == Complex(1.0));
  CHECK(s(3, 3) == Complex(1.0));
  CHECK(s(0, 0) == Complex(0.0));
  CHECK(s.norm() == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(shift_on_box(x, {1, 1}, 2, 1), Error);
}

TEST_CASE("two-variable decomposition identities") {
  const TwoVarReport p = check_2var_decomposition(positive_case(), kTol);
  CHECK(p.converged);
  CHECK(p.schureq1_gap <= 1e-6);
  CHECK(p.schureq2_gap <= 1e-6);
  CHECK(p.zero_pattern_gap <= 1e-6);

  const TwoVarReport c =
      check_2var_decomposition(LaurentPoly::constant(2, ComplexMatrix::Identity(2, 2)), kTol);
  CHECK(c.schureq1_gap == doctest::Approx(0.0));
  CHECK(c.schureq2_gap == doctest::Approx(0.0));
  CHECK(c.zero_pattern_gap == 0.0);

  const TwoVarReport n = check_2var_decomposition(negative_case(), kTol);
  const double threshold = decomposition_threshold(negative_case(), kTol);
  CHECK_FALSE(n.holds(threshold));
  CHECK(std::max({n.schureq1_gap, n.schureq2_gap, n.zero_pattern_gap}) > 10 * threshold);
}

TEST_CASE("stable factorization test") {
  const GwReport p = check_gw_stability(positive_case(), kTol);
  CHECK(p.stable_factorable);
  const GwReport n = check_gw_stability(negative_case(), kTol);
  CHECK_FALSE(n.stable_factorable);
  CHECK(n.max_entry == doctest::Approx(kNegativeGwEntry).epsilon(1e-7));

  // Degree zero in one variable: nothing to test.
  CoeffMap m;
  m.emplace(Exponent{0, 0}, scalar(5.0));
  m.emplace(Exponent{1, 0}, scalar(2.0));
  const GwReport v = check_gw_stability(LaurentPoly::from_canonical({1, 0}, 1, m), kTol);
  CHECK(v.stable_factorable);

  // |1 + z_1 z_2|^2 vanishes on the torus.
  CoeffMap z;
  z.emplace(Exponent{0, 0}, scalar(2.0));
  z.emplace(Exponent{1, 1}, scalar(1.0));
  try {
    check_gw_stability(LaurentPoly::from_canonical({1, 1}, 1, z), kTol);
    FAIL("expected not_psd");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_psd);
  }
  CHECK_THROWS_AS(check_gw_stability(laurent1({5.0, 2.0}), kTol), Error);
  CHECK_THROWS_AS(check_gw_stability(LaurentPoly::constant(2, ComplexMatrix::Identity(2, 2)), kTol),
                  Error);
}

TEST_CASE("boundary-degenerate symbol") {
  // |1 + z_1 z_2|^2: either the condition passes and the factor is close, or
  // the truncations report non-convergence.
  CoeffMap z;
  z.emplace(Exponent{0, 0}, scalar(2.0));
  z.emplace(Exponent{1, 1}, scalar(1.0));
  const LaurentPoly q = LaurentPoly::from_canonical({1, 1}, 1, z);
  Tolerances loose;
  loose.conv_tol = 1e-3;
  loose.residual_tol = 1e-3;
  const Factor2dResult f = factor_outer_2d(q, loose);
  if (f.factor.has_value()) {
    CHECK(phase_distance(f.factor->p, analytic2(1.0, 0.0, 0.0, 1.0)) < 1e-1);
  } else {
    CHECK((!f.condition.converged || !f.condition.passed));
  }
}

TEST_CASE("two-variable routines reject other dimensions") {
  CHECK_THROWS_AS(check_multi_condition(laurent1({5.0, 2.0}), kTol), Error);
  CHECK_THROWS_AS(check_2var_decomposition(laurent1({5.0, 2.0}), kTol), Error);
}
