#include "doctest.h"
#include "outerfact/error.hpp"
#include "support.hpp"

using namespace outerfact;
using namespace testing_support;

namespace {
const Tolerances kTol;
}

TEST_CASE("IndexSet basics") {
  const IndexSet a{3, 1};
  CHECK(a.members() == std::vector<std::size_t>{1, 3});
  CHECK_THROWS_AS(IndexSet({1, 1}), Error);
  CHECK(a.complement(5) == IndexSet{0, 2, 4});
  CHECK(a.united(IndexSet{2}) == IndexSet{1, 2, 3});
  CHECK(a.intersected(IndexSet{3, 4}) == IndexSet{3});
  CHECK(a.minus(IndexSet{1}) == IndexSet{3});
  CHECK(IndexSet{1}.subset_of(a));
  CHECK_THROWS_AS(a.check_within(3), Error);
}

TEST_CASE("schur_complement examples") {
  const auto r = schur_complement(PsdMatrix::validated(mat(2, 2, {2.0, 1.0, 1.0, 1.0}), kTol),
                                  IndexSet{0}, kTol);
  CHECK(std::abs(r.compact.matrix()(0, 0) - 1.0) < 1e-14);
  CHECK((r.padded() - mat(2, 2, {1.0, 0.0, 0.0, 0.0})).norm() < 1e-14);

  const auto id = schur_complement(PsdMatrix::validated(ComplexMatrix::Identity(4, 4), kTol),
                                   IndexSet{1, 3}, kTol);
  CHECK((id.compact.matrix() - ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

  std::mt19937_64 rng(4);
  const ComplexMatrix m = random_psd(rng, 5, 5);
  const auto full = schur_complement(PsdMatrix::validated(m, kTol), IndexSet::range(0, 5), kTol);
  CHECK((full.compact.matrix() - m).norm() < 1e-12);
  const auto none = schur_complement(PsdMatrix::validated(m, kTol), IndexSet{}, kTol);
  CHECK(none.compact.size() == 0);
  CHECK_THROWS_AS(
      schur_complement(PsdMatrix::validated(m, kTol), IndexSet{7}, kTol), Error);
}

TEST_CASE("schur_complement agrees with an independent oracle and is maximal") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix m = random_psd_any(rng, 8);
    const auto lambda = random_subset(rng, static_cast<std::size_t>(m.rows()));
    const auto r = schur_complement(PsdMatrix::validated(m, kTol), lambda, kTol);
    const double scale = std::max(1.0, m.norm());
    CHECK((r.compact.matrix() - oracle_schur(m, lambda)).norm() <= 1e-8 * scale);
    // M - pad(S) is PSD; M - pad(t S) stops being PSD once t > 1 (when S != 0).
    CHECK(min_eigenvalue(m - r.padded()) >= -kTol.psd_tol * scale);
    if (r.compact.matrix().norm() > 1e-6 * scale) {
      CHECK(min_eigenvalue(m - 1.2 * r.padded()) < -1e-12);
    }
    CHECK(min_eigenvalue(m - 0.5 * r.padded()) >= -kTol.psd_tol * scale);
  }
}

TEST_CASE("structured Cholesky") {
  const auto ones = structured_cholesky(PsdMatrix::validated(mat(2, 2, {1.0, 1.0, 1.0, 1.0}), kTol), 1, kTol);
  CHECK((ones.factor - mat(2, 2, {0.0, 0.0, 1.0, 1.0})).norm() < 1e-14);
  const auto d = structured_cholesky(PsdMatrix::validated(mat(2, 2, {4.0, 0.0, 0.0, 9.0}), kTol), 1, kTol);
  CHECK((d.factor - mat(2, 2, {2.0, 0.0, 0.0, 3.0})).norm() < 1e-14);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_psd(rng, 9, trial % 2 == 0 ? 9 : 5);
    const auto p = structured_cholesky(PsdMatrix::validated(m, kTol), 3, kTol);
    CHECK((p.factor.adjoint() * p.factor - m).norm() <= 1e-9 * m.norm());
    for (std::size_t k = 0; k < 3; ++k) {
      const ComplexMatrix lead = p.leading(k);
      const auto oracle = oracle_schur(m, IndexSet::range(0, 3 * (k + 1)));
      CHECK((lead.adjoint() * lead - oracle).norm() <= 1e-9 * m.norm());
    }
    CHECK(cholesky_range_conditions(p, 1e-8));
  }
}

TEST_CASE("quotient identity") {
  std::mt19937_64 rng(33);
  const ComplexMatrix m = random_psd(rng, 6, 4);
  const IndexSet k{0, 2, 3};
  CHECK(check_quotient_identity(PsdMatrix::validated(m, kTol), k, k, 1e-9, kTol).holds);
  CHECK(check_quotient_identity(PsdMatrix::validated(ComplexMatrix::Identity(5, 5), kTol),
                                IndexSet{1}, IndexSet{1, 4}, 1e-9, kTol).holds);
  CHECK_THROWS_AS(check_quotient_identity(PsdMatrix::validated(m, kTol), IndexSet{1}, k, 1e-9, kTol), Error);
  int failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const ComplexMatrix r = random_psd_any(rng, 10);
    const auto big = random_subset(rng, static_cast<std::size_t>(r.rows()));
    std::vector<std::size_t> small;
    for (auto v : big.members())
      if (rng() % 2 == 0) small.push_back(v);
    if (!check_quotient_identity(PsdMatrix::validated(r, kTol), IndexSet(small), big, 1e-9, kTol).holds)
      ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("inclusion-exclusion examples") {
  // Blocks on K\J = {2} and J\K = {1} decoupled.
  ComplexMatrix m = ComplexMatrix::Identity(3, 3);
  m(0, 1) = m(1, 0) = 0.5;
  m(0, 2) = m(2, 0) = 0.5;
  const auto dec = check_inclusion_exclusion(PsdMatrix::validated(m, kTol), IndexSet{0, 1},
                                             IndexSet{0, 2}, 1e-9, kTol);
  CHECK(dec.identity_holds);
  CHECK(dec.zero_pattern_holds);

  // All ones: S({0,1,2}) of ones(4) is the zero matrix, so both hold.
  const ComplexMatrix ones = ComplexMatrix::Constant(4, 4, 1.0);
  const auto o = check_inclusion_exclusion(PsdMatrix::validated(ones, kTol), IndexSet{0, 1},
                                           IndexSet{0, 2}, 1e-9, kTol);
  CHECK(oracle_schur(ones, IndexSet{0, 1, 2}).norm() < 1e-12);
  CHECK(o.identity_holds);
  CHECK(o.zero_pattern_holds);

  // ones(3) + I couples 1 and 2 through 0, so both fail.
  const ComplexMatrix coupled = ComplexMatrix::Constant(3, 3, 1.0) + ComplexMatrix::Identity(3, 3);
  const auto c = check_inclusion_exclusion(PsdMatrix::validated(coupled, kTol), IndexSet{0, 1},
                                           IndexSet{0, 2}, 1e-9, kTol);
  CHECK_FALSE(c.identity_holds);
  CHECK_FALSE(c.zero_pattern_holds);
}

TEST_CASE("inclusion-exclusion flags agree") {
  std::mt19937_64 rng(55);
  int disagreements = 0;
  int zero_cases = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // Half the trials force the zero pattern by decoupling blocks 1 and 2.
    ComplexMatrix m = random_psd(rng, 4, trial % 3 == 0 ? 2 : 4);
    if (trial % 2 == 0) {
      const ComplexMatrix a = random_psd(rng, 2, 2);
      const ComplexMatrix b = random_psd(rng, 2, 2);
      m.setZero();
      m.block(0, 0, 2, 2) += a;
      m(0, 0) += b(0, 0);
      m(0, 2) += b(0, 1);
      m(2, 0) += b(1, 0);
      m(2, 2) += b(1, 1);
      m(3, 3) += 1.0;
    }
    const auto r = check_inclusion_exclusion(PsdMatrix::validated(m, kTol), IndexSet{0, 1},
                                             IndexSet{0, 2}, 1e-9, kTol);
    if (r.identity_holds != r.zero_pattern_holds) ++disagreements;
    if (r.zero_pattern_holds) ++zero_cases;
  }
  CHECK(disagreements == 0);
  CHECK(zero_cases >= 400);
}

TEST_CASE("block factor predicate") {
  const ComplexMatrix one = scalar(1.0);
  const ComplexMatrix zero = scalar(0.0);
  CHECK(block_factor_predicate(one, zero, one, BlockFactor{one, zero, one}, 1e-9, 1e-10));
  // [[2,0],[0,0]] = L^* L with P = Q = 1, R = 0: ran Q is not inside ran R and
  // S(0) = 2 differs from P^* P = 1.
  const ComplexMatrix two = scalar(2.0);
  CHECK_FALSE(block_factor_predicate(two, zero, zero, BlockFactor{one, one, zero}, 1e-9, 1e-10));
  CHECK_THROWS_AS(block_factor_predicate(one, zero, zero, BlockFactor{one, one, zero}, 1e-9, 1e-10),
                  Error);

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    // Constructive branch: Q = R X keeps ran Q inside ran R.
    const ComplexMatrix p = random_complex(rng, 2, 2);
    const ComplexMatrix r = random_complex(rng, 3, 2) * random_complex(rng, 2, 3);
    const ComplexMatrix q = r * random_complex(rng, 3, 2);
    const BlockFactor f{p, q, r};
    const ComplexMatrix l = f.assembled();
    const ComplexMatrix m = l.adjoint() * l;
    CHECK(block_factor_predicate(m.topLeftCorner(2, 2), m.topRightCorner(2, 3),
                                 m.bottomRightCorner(3, 3), f, 1e-9, 1e-10));
    CHECK((oracle_schur(m, IndexSet{0, 1}) - p.adjoint() * p).norm() <= 1e-8 * m.norm());
  }
}

TEST_CASE("unique isometry factor") {
  const BlockFactor f{scalar(2.0), scalar(0.0), scalar(1.0)};
  const BlockFactor g{scalar(-2.0), scalar(0.0), scalar(1.0)};
  const auto v = unique_isometry_factor(f, g, 1e-9, 1e-10);
  CHECK((v.v - mat(2, 2, {-1.0, 0.0, 0.0, 1.0})).norm() < 1e-12);
  const auto same = unique_isometry_factor(f, f, 1e-9, 1e-10);
  CHECK((same.v - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

  std::mt19937_64 rng(88);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix p = random_complex(rng, 2, 2);
    const ComplexMatrix r = random_complex(rng, 2, 2);
    const ComplexMatrix q = r * random_complex(rng, 2, 2);
    const BlockFactor a{p, q, r};
    // Block lower triangular unitary W = [[U1, 0], [0, U2]].
    const ComplexMatrix u1 = polar_unitary(random_complex(rng, 2, 2));
    const ComplexMatrix u2 = polar_unitary(random_complex(rng, 2, 2));
    const BlockFactor b{u1 * p, u2 * q, u2 * r};
    const auto iso = unique_isometry_factor(a, b, 1e-9, 1e-10);
    CHECK(iso.upper_block_norm < 1e-9);
    CHECK(iso.isometry_defect < 1e-8);
    CHECK(iso.intertwining_defect < 1e-8);
    CHECK((iso.v.topLeftCorner(2, 2) - u1).norm() < 1e-8);
    CHECK((iso.v.bottomRightCorner(2, 2) - u2).norm() < 1e-8);
  }
}
