#include "bisep/separating.hpp"

#include <algorithm>
#include <vector>

#include "bisep/random.hpp"

namespace bisep {

const char* to_string(Status status) {
  switch (status) {
    case Status::separating: return "separating";
    case Status::not_separating: return "not_separating";
    case Status::biseparating: return "biseparating";
    case Status::not_invertible: return "not_invertible";
  }
  return "unknown";
}

const char* to_string(Direction direction) {
  return direction == Direction::forward ? "forward" : "inverse";
}

ScalarTest scalar_identity_test(const Matrix& m, const FieldConfig& cfg, double scale) {
  ScalarTest out;
  const Eigen::Index n = m.rows();
  out.c = n > 0 ? m.diagonal().mean() : Scalar(0.0);
  for (Eigen::Index b = 0; b < n && out.is_scalar; ++b) {
    for (Eigen::Index a = 0; a < n; ++a) {
      if (a != b && !cfg.is_zero(std::abs(m(a, b)), scale)) {
        out.is_scalar = false;
        break;
      }
    }
  }
  for (Eigen::Index a = 0; a + 1 < n && out.is_scalar; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      if (!cfg.is_zero(std::abs(m(a, a) - m(b, b)), scale)) {
        out.is_scalar = false;
        break;
      }
    }
  }
  return out;
}

double product_scale(std::span<const Matrix> images) {
  double scale = 0.0;
  for (const auto& img : images) scale = std::max(scale, img.squaredNorm());
  return scale;
}

namespace detail {

std::optional<QuadricViolation> find_quadric_violation(std::span<const Matrix> images, Eigen::Index n,
                                                       double threshold) {
  if (n <= 1 || images.empty()) return std::nullopt;
  const Eigen::Index m = images.front().rows();
  auto image = [&](Eigen::Index r, Eigen::Index c) -> const Matrix& {
    return images[static_cast<std::size_t>(vec_index(r, c, n))];
  };

  std::optional<QuadricViolation> first_diagonal;
  std::vector<Matrix> products(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index l = 0; l < n; ++l) {
      // products[a * n + b] = T(E_ia) T(E_bl)
      for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
          products[static_cast<std::size_t>(a * n + b)].noalias() = image(i, a) * image(b, l);
        }
      }
      auto entry = [&](Eigen::Index a, Eigen::Index b, Eigen::Index p, Eigen::Index q) {
        return products[static_cast<std::size_t>(a * n + b)](p, q);
      };
      for (Eigen::Index q = 0; q < m; ++q) {
        for (Eigen::Index p = 0; p < m; ++p) {
          for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = 0; b < n; ++b) {
              if (a == b) continue;
              if (std::abs(entry(a, b, p, q)) > threshold) {
                return QuadricViolation{i, l, p, q, a, b, true};
              }
            }
          }
          if (first_diagonal) continue;
          for (Eigen::Index a = 0; a + 1 < n && !first_diagonal; ++a) {
            for (Eigen::Index b = a + 1; b < n; ++b) {
              if (std::abs(entry(a, a, p, q) - entry(b, b, p, q)) > threshold) {
                first_diagonal = QuadricViolation{i, l, p, q, a, b, false};
                break;
              }
            }
          }
        }
      }
    }
  }
  return first_diagonal;
}

std::pair<Matrix, Matrix> witness_pair(const QuadricViolation& v, Eigen::Index n) {
  if (v.off_diagonal) {
    return {matrix_unit(n, n, v.i, v.a), matrix_unit(n, n, v.b, v.l)};
  }
  const Covector sum(basis_vector(n, v.a) + basis_vector(n, v.b));
  const Vector diff = basis_vector(n, v.a) - basis_vector(n, v.b);
  return {outer(basis_vector(n, v.i), sum), outer(diff, Covector(basis_vector(n, v.l)))};
}

}  // namespace detail

namespace {

Counterexample make_counterexample(const Superoperator& t, Matrix a, Matrix b) {
  Counterexample cx;
  cx.product_in_norm = (a * b).norm();
  cx.violation_norm = (apply_map(t, a) * apply_map(t, b)).norm();
  cx.a = std::move(a);
  cx.b = std::move(b);
  return cx;
}

double entry_l1(const Matrix& a) {
  return a.cwiseAbs().sum();
}

}  // namespace

Verdict is_separating_exact(const Superoperator& t, const FieldConfig& cfg) {
  Verdict verdict;
  const Eigen::Index n = t.n_in();
  // n = 1: a product of scalars vanishes only when a factor does, so every
  // linear map is separating.
  if (n == 1) return verdict;

  const auto images = basis_images(t);
  const double threshold = cfg.threshold(product_scale(images));
  if (auto v = detail::find_quadric_violation(images, n, threshold)) {
    auto [a, b] = detail::witness_pair(*v, n);
    verdict.status = Status::not_separating;
    verdict.counterexample = make_counterexample(t, std::move(a), std::move(b));
  }
  return verdict;
}

std::pair<Matrix, Matrix> random_zero_product_pair(Eigen::Index n, Eigen::Index rank_a,
                                                   Eigen::Index rank_b, std::uint64_t seed,
                                                   Field field) {
  if (n < 1 || rank_a < 0 || rank_b < 0 || rank_a + rank_b > n) {
    throw std::invalid_argument("random_zero_product_pair: infeasible ranks " +
                                std::to_string(rank_a) + "+" + std::to_string(rank_b) + " > " +
                                std::to_string(n));
  }
  Rng rng(seed);
  // Columns [0, rank_b) of Q span W = range(B); the rest span its orthogonal
  // complement, whose conjugate transposes annihilate W under the bilinear
  // pairing.
  Eigen::HouseholderQR<Matrix> qr(rng.matrix(n, n, field));
  Matrix q = qr.householderQ();
  FieldConfig snap;
  snap.field = field;
  snap_to_field(q, snap);

  Matrix b = Matrix::Zero(n, n);
  if (rank_b > 0) b = q.leftCols(rank_b) * rng.matrix(rank_b, n, field);

  Matrix a = Matrix::Zero(n, n);
  if (rank_a > 0) {
    const Matrix complement = q.rightCols(n - rank_b).adjoint();
    a = rng.matrix(n, rank_a, field) * rng.matrix(rank_a, n - rank_b, field) * complement;
  }
  return {std::move(a), std::move(b)};
}

Verdict is_separating_sampled(const Superoperator& t, int trials, std::uint64_t seed,
                              const FieldConfig& cfg) {
  if (trials < 1) throw std::invalid_argument("is_separating_sampled: trials must be >= 1");
  Verdict verdict;
  const Eigen::Index n = t.n_in();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> splits;
  for (Eigen::Index ra = 1; ra < n; ++ra) {
    for (Eigen::Index rb = 1; ra + rb <= n; ++rb) splits.emplace_back(ra, rb);
  }
  if (splits.empty()) return verdict;

  const double image_scale = product_scale(basis_images(t));
  Rng seeds(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const auto [ra, rb] = splits[static_cast<std::size_t>(trial) % splits.size()];
    auto [a, b] = random_zero_product_pair(n, ra, rb, seeds.next(), cfg.field);
    const Matrix product = apply_map(t, a) * apply_map(t, b);
    const double scale = image_scale * entry_l1(a) * entry_l1(b);
    if (!cfg.is_zero(product.norm(), scale)) {
      verdict.status = Status::not_separating;
      verdict.counterexample = make_counterexample(t, std::move(a), std::move(b));
      return verdict;
    }
  }
  return verdict;
}

Verdict is_biseparating(const Superoperator& t, const FieldConfig& cfg) {
  Verdict verdict;
  if (t.n_in() != t.n_out()) {
    verdict.status = Status::not_invertible;
    return verdict;
  }
  std::optional<SuperopInverse> inv;
  try {
    inv = inverse(Superoperator(t.n_in(), t.n_out(), t.mat(), cfg));
  } catch (const Singular&) {
    verdict.status = Status::not_invertible;
    return verdict;
  }

  verdict = is_separating_exact(t, cfg);
  if (!verdict.passed()) {
    verdict.direction = Direction::forward;
    return verdict;
  }
  verdict = is_separating_exact(inv->map, cfg);
  if (!verdict.passed()) {
    verdict.direction = Direction::inverse;
    return verdict;
  }
  verdict.status = Status::biseparating;
  return verdict;
}

}  // namespace bisep
