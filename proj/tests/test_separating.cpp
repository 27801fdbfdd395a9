#include <doctest.h>

#include "bisep/harness.hpp"
#include "bisep/separating.hpp"
#include "test_support.hpp"

using namespace bisep;
using testsupport::mat2;
using testsupport::unit;

namespace {

// A witness must multiply to zero and have images that do not.
void check_self_verifying(const Superoperator& t, const Counterexample& ce, const FieldConfig& cfg) {
  const double ab = (ce.a * ce.b).norm();
  CHECK(ab <= 1e-13 * ce.a.norm() * ce.b.norm());
  const auto imgs = basis_images(t);
  const double scale = product_scale(imgs);
  const double img = (apply_map(t, ce.a) * apply_map(t, ce.b)).norm();
  CHECK(img > cfg.tol_rel * scale);
}

// Sampling oracle with test-local pairs, for agreement checks.
bool oracle_separating(const Superoperator& t, int trials, std::uint32_t seed, const FieldConfig& cfg) {
  testsupport::TestRng rng(seed);
  const Eigen::Index n = t.n_in();
  if (n == 1) return true;
  const auto imgs = basis_images(t);
  double scale = 0.0;
  for (const auto& m : imgs) scale = std::max(scale, m.squaredNorm());
  for (int k = 0; k < trials; ++k) {
    const Eigen::Index rb = 1 + k % (n - 1);
    const Eigen::Index ra = n - rb;
    auto [a, b] = testsupport::oracle_zero_product_pair(rng, n, rb, ra);
    a /= a.cwiseAbs().sum();
    b /= b.cwiseAbs().sum();
    const double v = (apply_map(t, a) * apply_map(t, b)).norm();
    if (v > cfg.tol_abs + cfg.tol_rel * scale) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("scalar_identity_test") {
  const FieldConfig cfg;
  auto r = scalar_identity_test(5.0 * Matrix::Identity(3, 3), cfg, 1.0);
  CHECK(r.is_scalar);
  CHECK(std::abs(r.c - 5.0) < 1e-15);
  CHECK_FALSE(scalar_identity_test(unit(2, 0, 1), cfg, 1.0).is_scalar);
  Matrix d = Matrix::Identity(2, 2);
  d(1, 1) = 1.0 + 1e-12;
  r = scalar_identity_test(d, cfg, 1.0);
  CHECK(r.is_scalar);
  CHECK(std::abs(r.c - 1.0) < 1e-11);
  CHECK_FALSE(scalar_identity_test(mat2(1, 0, 0, 2), cfg, 1.0).is_scalar);
}

TEST_CASE("transpose on M2 gives the matrix-unit counterexample") {
  const FieldConfig cfg;
  const auto t = gen_transpose(2, cfg);
  const auto v = is_separating_exact(t, cfg);
  CHECK(v.status == Status::not_separating);
  REQUIRE(v.counterexample);
  CHECK(v.counterexample->a == unit(2, 0, 1));
  CHECK(v.counterexample->b == unit(2, 0, 0));
  // E12 E11 = 0 while E21 E11 = E21
  CHECK((unit(2, 0, 1) * unit(2, 0, 0)).isZero());
  CHECK(unit(2, 1, 0) * unit(2, 0, 0) == unit(2, 1, 0));
  check_self_verifying(t, *v.counterexample, cfg);

  const auto b = is_biseparating(t, cfg);
  CHECK(b.status == Status::not_separating);
  REQUIRE(b.direction);
  CHECK(*b.direction == Direction::forward);
}

TEST_CASE("transpose counterexamples self-verify for n up to 6") {
  const FieldConfig cfg;
  for (Eigen::Index n = 2; n <= 6; ++n) {
    const auto t = gen_transpose(n, cfg);
    const auto v = is_separating_exact(t, cfg);
    REQUIRE(v.status == Status::not_separating);
    check_self_verifying(t, *v.counterexample, cfg);
  }
}

TEST_CASE("conjugations are separating and biseparating") {
  const FieldConfig cfg;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 6);
    const auto b = gen_conjugation(n, seed);
    CHECK(is_separating_exact(b.superop(), cfg).status == Status::separating);
    CHECK(is_biseparating(b.superop(), cfg).status == Status::biseparating);
  }
}

TEST_CASE("n = 1 is always separating") {
  const FieldConfig cfg;
  Matrix m(1, 1);
  m(0, 0) = 0.0;
  CHECK(is_separating_exact(Superoperator(1, 1, m, cfg), cfg).status == Status::separating);
  m(0, 0) = -4.5;
  CHECK(is_separating_exact(Superoperator(1, 1, m, cfg), cfg).status == Status::separating);
}

TEST_CASE("rank-deficient maps are not invertible") {
  const FieldConfig cfg;
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = 0.0;
  CHECK(is_biseparating(Superoperator(2, 2, m, cfg), cfg).status == Status::not_invertible);
  CHECK(is_biseparating(Superoperator::zero(2, 3, cfg), cfg).status == Status::not_invertible);
}

TEST_CASE("diagonal mismatch witness") {
  // T(A) = A with E22 image doubled: AB = 0 pairs through the diagonal
  // break, and the off-diagonal M entries vanish for some (i, l).
  const FieldConfig cfg;
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = 2.0;
  const Superoperator t(2, 2, m, cfg);
  const auto v = is_separating_exact(t, cfg);
  REQUIRE(v.status == Status::not_separating);
  check_self_verifying(t, *v.counterexample, cfg);
}

TEST_CASE("random_zero_product_pair") {
  auto [a, b] = random_zero_product_pair(4, 2, 2, 7);
  CHECK((a * b).norm() <= 1e-13 * a.norm() * b.norm());
  const FieldConfig cfg;
  CHECK(numeric_rank(a, cfg) == 2);
  CHECK(numeric_rank(b, cfg) == 2);

  auto [a1, b1] = random_zero_product_pair(2, 1, 1, 3);
  CHECK((a1 * b1).norm() <= 1e-14 * std::max(1.0, a1.norm() * b1.norm()));

  auto [a0, b0] = random_zero_product_pair(3, 0, 2, 1);
  CHECK(a0.isZero());
  CHECK(numeric_rank(b0, cfg) == 2);

  auto [ac, bc] = random_zero_product_pair(3, 1, 2, 4, Field::complex);
  CHECK((ac * bc).norm() <= 1e-13 * ac.norm() * bc.norm());
  CHECK_THROWS(random_zero_product_pair(3, 2, 2, 1));
}

TEST_CASE("sampled checker") {
  const FieldConfig cfg;
  CHECK(is_separating_sampled(Superoperator::identity(3, cfg), 1000, 1, cfg).status == Status::separating);
  const auto v = is_separating_sampled(gen_transpose(2, cfg), 200, 1, cfg);
  CHECK(v.status == Status::not_separating);
  REQUIRE(v.counterexample);
  check_self_verifying(gen_transpose(2, cfg), *v.counterexample, cfg);
}

TEST_CASE("exact, sampled and test-local oracle agree on random maps") {
  const FieldConfig cfg;
  testsupport::TestRng rng(101);
  int negatives = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Superoperator t = Superoperator::identity(3, cfg);
    switch (trial % 4) {
      case 0: t = Superoperator(3, 3, rng.real_matrix(9, 9), cfg); break;
      case 1: t = gen_conjugation(3, static_cast<std::uint64_t>(trial)).superop(); break;
      case 2: t = perturb(gen_conjugation(3, static_cast<std::uint64_t>(trial)).superop(), 1e-3, trial); break;
      default: t = gen_transpose(3, cfg); break;
    }
    const auto exact = is_separating_exact(t, cfg).status;
    const auto sampled = is_separating_sampled(t, 300, static_cast<std::uint64_t>(trial), cfg).status;
    const bool oracle = oracle_separating(t, 300, static_cast<std::uint32_t>(trial), cfg);
    CHECK(exact == sampled);
    CHECK((exact == Status::separating) == oracle);
    if (exact == Status::not_separating) ++negatives;
  }
  CHECK(negatives == 75);
}

TEST_CASE("verdict is invariant under rescaling the map") {
  // Down to where squared images approach tol_abs; below that every map is
  // numerically zero.
  const FieldConfig cfg;
  for (double c : {1e-3, 1.0, 1e3, 1e6}) {
    const auto conj = gen_conjugation(3, 4).superop();
    CHECK(is_separating_exact(Superoperator(3, 3, c * conj.mat(), cfg), cfg).status == Status::separating);
    const auto tr = gen_transpose(3, cfg);
    CHECK(is_separating_exact(Superoperator(3, 3, c * tr.mat(), cfg), cfg).status == Status::not_separating);
  }
}

TEST_CASE("maps into a different dimension") {
  // A -> A (x) blockwise copies is separating from M2 into M4.
  const FieldConfig cfg;
  Matrix m = Matrix::Zero(16, 4);
  for (Eigen::Index q = 0; q < 2; ++q)
    for (Eigen::Index p = 0; p < 2; ++p) {
      Matrix img = Matrix::Zero(4, 4);
      img(p, q) = 1.0;
      img(p + 2, q + 2) = 1.0;
      m.col(vec_index(p, q, 2)) = vectorize(img);
    }
  const Superoperator t(2, 4, m, cfg);
  CHECK(is_separating_exact(t, cfg).status == Status::separating);
  CHECK(is_biseparating(t, cfg).status == Status::not_invertible);
}
