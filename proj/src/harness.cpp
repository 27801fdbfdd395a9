#include "bisep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bisep/random.hpp"

namespace bisep {

namespace {

constexpr int kConditionAttempts = 1000;
constexpr double kBundleResidualCap = 1e-10;

Scalar draw_alpha(Rng& rng, AlphaRange range, Field field) {
  if (!(range.lo > 0.0) || range.hi < range.lo) throw std::invalid_argument("alpha range must satisfy 0 < lo <= hi");
  return rng.uniform(range.lo, range.hi) * rng.phase(field);
}

double condition(const Matrix& s, const FieldConfig& cfg) {
  const auto sv = singular_values(s, cfg);
  const double smallest = sv(sv.size() - 1);
  return smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
}

Matrix draw_similarity(Rng& rng, Eigen::Index n, double cond_cap, const FieldConfig& cfg) {
  if (cond_cap <= 1.0) return Matrix::Identity(n, n);
  for (int attempt = 0; attempt < kConditionAttempts; ++attempt) {
    Matrix s = rng.matrix(n, n, cfg.field);
    if (condition(s, cfg) <= cond_cap) return s;
  }
  // I + r G with ||r G||_2 < 1 has cond <= (1 + r||G||) / (1 - r||G||)
  const Matrix g = rng.matrix(n, n, cfg.field);
  const double ratio = 0.99 * (cond_cap - 1.0) / (cond_cap + 1.0);
  return Matrix::Identity(n, n) + g * (ratio / singular_values(g, cfg)(0));
}

}  // namespace

InstanceBundle gen_conjugation(Eigen::Index n, std::uint64_t seed, AlphaRange alpha_range, double cond_cap,
                               const FieldConfig& cfg) {
  if (n < 1) throw std::invalid_argument("gen_conjugation: n must be >= 1");
  Rng rng(seed);
  const Scalar alpha = draw_alpha(rng, alpha_range, cfg.field);
  const Matrix s = draw_similarity(rng, n, cond_cap, cfg);
  Superoperator map = conjugation_superop(alpha, s, cfg);
  ConjugationForm truth{alpha, gauge_normalize(s, cfg)};
  if (verify_form(map, truth, cfg) > kBundleResidualCap) {
    throw std::logic_error("gen_conjugation: ground truth does not reproduce the map");
  }
  return {"conjugation n=" + std::to_string(n), std::move(truth), std::move(map), seed};
}

InstanceBundle gen_pointwise(std::size_t k, Eigen::Index n, std::uint64_t seed, AlphaRange alpha_range,
                             double cond_cap, const FieldConfig& cfg) {
  if (k < 1 || n < 1) throw std::invalid_argument("gen_pointwise: k and n must be >= 1");
  Rng rng(~seed);
  const auto phi = rng.permutation(k);
  auto points_in = DiscreteSpace::numbered(k, "x");
  auto points_out = DiscreteSpace::numbered(k, "y");
  std::vector<std::vector<Superoperator>> blocks(k, std::vector<Superoperator>(k, Superoperator::zero(n, n, cfg)));
  PointwiseForm truth;
  truth.phi = phi;
  for (std::size_t x2 = 0; x2 < k; ++x2) {
    // point x2 uses seed + x2 * golden, so a one-point instance matches
    // gen_conjugation(n, seed)
    const std::uint64_t point_seed = seed + 0x9E37'79B9'7F4A'7C15ULL * x2;
    auto local = gen_conjugation(n, point_seed, alpha_range, cond_cap, cfg);
    auto& form = std::get<ConjugationForm>(local.ground_truth);
    truth.alpha.push_back(form.alpha);
    truth.s.push_back(form.s);
    blocks[x2][phi[x2]] = local.superop();
  }
  BigSuperoperator map(std::move(points_in), std::move(points_out), n, n, std::move(blocks), cfg);
  if (verify_pointwise(map, truth, cfg) > kBundleResidualCap) {
    throw std::logic_error("gen_pointwise: ground truth does not reproduce the map");
  }
  return {"pointwise k=" + std::to_string(k) + " n=" + std::to_string(n), std::move(truth), std::move(map), seed};
}

Superoperator gen_transpose(Eigen::Index n, const FieldConfig& cfg) {
  Matrix mat = Matrix::Zero(n * n, n * n);
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index p = 0; p < n; ++p) mat(vec_index(q, p, n), vec_index(p, q, n)) = 1.0;
  }
  return Superoperator(n, n, std::move(mat), cfg);
}

BigSuperoperator gen_point_mixing(std::size_t k, Eigen::Index n, std::uint64_t seed, const FieldConfig& cfg) {
  if (k < 2) throw std::invalid_argument("gen_point_mixing: needs at least two points");
  Rng rng(seed);
  std::vector<std::vector<Superoperator>> blocks(k, std::vector<Superoperator>(k, Superoperator::zero(n, n, cfg)));
  for (std::size_t x = 0; x < k; ++x) {
    blocks[x][x] = gen_conjugation(n, rng.next(), {}, kDefaultCondCap, cfg).superop();
  }
  const Superoperator half(n, n, 0.5 * blocks[0][0].mat(), cfg);
  blocks[0][0] = half;
  blocks[0][1] = half;
  return BigSuperoperator(DiscreteSpace::numbered(k, "x"), DiscreteSpace::numbered(k, "y"), n, n, std::move(blocks),
                          cfg);
}

Superoperator perturb(const Superoperator& map, double eps, std::uint64_t seed) {
  if (eps < 0.0) throw std::invalid_argument("perturb: eps must be >= 0");
  if (eps == 0.0) return map;
  Rng rng(seed);
  Matrix g = rng.matrix(map.mat().rows(), map.mat().cols(), map.cfg().field);
  g /= g.norm();
  return Superoperator(map.n_in(), map.n_out(), map.mat() + eps * g, map.cfg());
}

BigSuperoperator perturb(const BigSuperoperator& map, double eps, std::uint64_t seed) {
  if (eps < 0.0) throw std::invalid_argument("perturb: eps must be >= 0");
  if (eps == 0.0) return map;
  Rng rng(seed);
  const Matrix mat = map.to_matrix();
  Matrix g = rng.matrix(mat.rows(), mat.cols(), map.cfg().field);
  g /= g.norm();
  return BigSuperoperator::from_matrix(map.points_in(), map.points_out(), map.n_in(), map.n_out(), mat + eps * g,
                                       map.cfg());
}

namespace {

// T(A) summed entry by entry: column q*n + p of the stored matrix is the
// image of E_pq, row c*m + r its (r, c) entry.
Matrix image_by_entries(const Matrix& mat, Eigen::Index n, Eigen::Index m, const Matrix& a) {
  Matrix out = Matrix::Zero(m, m);
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index p = 0; p < n; ++p) {
      if (a(p, q) == Scalar(0.0)) continue;
      for (Eigen::Index c = 0; c < m; ++c) {
        for (Eigen::Index r = 0; r < m; ++r) out(r, c) += mat(c * m + r, q * n + p) * a(p, q);
      }
    }
  }
  return out;
}

}  // namespace

Verdict brute_force_separating_oracle(const Superoperator& t, int trials, std::uint64_t seed, const FieldConfig& cfg) {
  if (trials < 1) throw std::invalid_argument("oracle: trials must be >= 1");
  Verdict verdict;
  const Eigen::Index n = t.n_in();
  const Eigen::Index m = t.n_out();
  if (n < 2) return verdict;

  double max_col_sq = 0.0;
  for (Eigen::Index j = 0; j < t.mat().cols(); ++j) max_col_sq = std::max(max_col_sq, t.mat().col(j).squaredNorm());

  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const auto ra = static_cast<Eigen::Index>(1 + rng.index(static_cast<std::size_t>(n - 1)));
    const auto rb = static_cast<Eigen::Index>(1 + rng.index(static_cast<std::size_t>(n - ra)));
    auto [a, b] = random_zero_product_pair(n, ra, rb, rng.next(), cfg.field);
    const Matrix product = image_by_entries(t.mat(), n, m, a) * image_by_entries(t.mat(), n, m, b);
    const double scale = max_col_sq * a.cwiseAbs().sum() * b.cwiseAbs().sum();
    if (product.norm() > cfg.tol_abs + cfg.tol_rel * scale) {
      Counterexample cx;
      cx.product_in_norm = (a * b).norm();
      cx.violation_norm = product.norm();
      cx.a = std::move(a);
      cx.b = std::move(b);
      verdict.status = Status::not_separating;
      verdict.counterexample = std::move(cx);
      return verdict;
    }
  }
  return verdict;
}

}  // namespace bisep
