#include "bisep/funcalg.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace bisep {

DiscreteSpace::DiscreteSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("discrete space needs at least one point");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate point label '" + l + "'");
  }
}

DiscreteSpace DiscreteSpace::numbered(std::size_t k, const std::string& prefix) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back(prefix + std::to_string(i + 1));
  return DiscreteSpace(std::move(labels));
}

std::size_t DiscreteSpace::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("unknown point label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

MatrixFunction::MatrixFunction(DiscreteSpace sp, Eigen::Index dim, std::vector<Matrix> vals)
    : space(std::move(sp)), n(dim), values(std::move(vals)) {
  if (values.size() != space.size()) throw DimensionMismatch("one value per point required");
  for (const auto& v : values) {
    if (v.rows() != n || v.cols() != n) throw DimensionMismatch("function values must be n x n");
  }
}

MatrixFunction MatrixFunction::zero(const DiscreteSpace& space, Eigen::Index n) {
  return MatrixFunction(space, n, std::vector<Matrix>(space.size(), Matrix::Zero(n, n)));
}

MatrixFunction MatrixFunction::delta(const DiscreteSpace& space, std::size_t x, const Matrix& value) {
  auto f = zero(space, value.rows());
  f.values.at(x) = value;
  return f;
}

MatrixFunction MatrixFunction::operator*(const MatrixFunction& other) const {
  if (!(space == other.space) || n != other.n) throw DimensionMismatch("pointwise product of mismatched functions");
  std::vector<Matrix> out;
  out.reserve(values.size());
  for (std::size_t x = 0; x < values.size(); ++x) out.push_back(values[x] * other.values[x]);
  return MatrixFunction(space, n, std::move(out));
}

double MatrixFunction::norm() const {
  double sq = 0.0;
  for (const auto& v : values) sq += v.squaredNorm();
  return std::sqrt(sq);
}

BigSuperoperator::BigSuperoperator(DiscreteSpace points_in, DiscreteSpace points_out, Eigen::Index n_in,
                                   Eigen::Index n_out, std::vector<std::vector<Superoperator>> blocks,
                                   FieldConfig cfg)
    : points_in_(std::move(points_in)),
      points_out_(std::move(points_out)),
      n_in_(n_in),
      n_out_(n_out),
      blocks_(std::move(blocks)),
      cfg_(cfg) {
  if (blocks_.size() != points_out_.size()) throw DimensionMismatch("one block row per output point required");
  for (const auto& row : blocks_) {
    if (row.size() != points_in_.size()) throw DimensionMismatch("one block per input point required");
    for (const auto& b : row) {
      if (b.n_in() != n_in_ || b.n_out() != n_out_) throw DimensionMismatch("block has the wrong shape");
    }
  }
}

BigSuperoperator BigSuperoperator::zero(DiscreteSpace points_in, DiscreteSpace points_out, Eigen::Index n_in,
                                        Eigen::Index n_out, FieldConfig cfg) {
  std::vector<std::vector<Superoperator>> blocks(
      points_out.size(),
      std::vector<Superoperator>(points_in.size(), Superoperator::zero(n_in, n_out, cfg)));
  return BigSuperoperator(std::move(points_in), std::move(points_out), n_in, n_out, std::move(blocks), cfg);
}

BigSuperoperator BigSuperoperator::from_matrix(DiscreteSpace points_in, DiscreteSpace points_out,
                                               Eigen::Index n_in, Eigen::Index n_out, const Matrix& mat,
                                               FieldConfig cfg) {
  const Eigen::Index rows = n_out * n_out;
  const Eigen::Index cols = n_in * n_in;
  const auto k_in = static_cast<Eigen::Index>(points_in.size());
  const auto k_out = static_cast<Eigen::Index>(points_out.size());
  if (mat.rows() != k_out * rows || mat.cols() != k_in * cols) {
    throw DimensionMismatch("big superoperator matrix has the wrong shape");
  }
  std::vector<std::vector<Superoperator>> blocks(points_out.size());
  for (Eigen::Index x2 = 0; x2 < k_out; ++x2) {
    for (Eigen::Index x1 = 0; x1 < k_in; ++x1) {
      blocks[static_cast<std::size_t>(x2)].emplace_back(n_in, n_out, mat.block(x2 * rows, x1 * cols, rows, cols),
                                                        cfg);
    }
  }
  return BigSuperoperator(std::move(points_in), std::move(points_out), n_in, n_out, std::move(blocks), cfg);
}

Matrix BigSuperoperator::to_matrix() const {
  const Eigen::Index rows = n_out_ * n_out_;
  const Eigen::Index cols = n_in_ * n_in_;
  Matrix mat(static_cast<Eigen::Index>(points_out_.size()) * rows,
             static_cast<Eigen::Index>(points_in_.size()) * cols);
  for (std::size_t x2 = 0; x2 < points_out_.size(); ++x2) {
    for (std::size_t x1 = 0; x1 < points_in_.size(); ++x1) {
      mat.block(static_cast<Eigen::Index>(x2) * rows, static_cast<Eigen::Index>(x1) * cols, rows, cols) =
          blocks_[x2][x1].mat();
    }
  }
  return mat;
}

MatrixFunction apply_fn(const BigSuperoperator& t, const MatrixFunction& f) {
  if (!(f.space == t.points_in()) || f.n != t.n_in()) throw DimensionMismatch("apply_fn: function does not match domain");
  auto out = MatrixFunction::zero(t.points_out(), t.n_out());
  for (std::size_t x2 = 0; x2 < t.points_out().size(); ++x2) {
    for (std::size_t x1 = 0; x1 < t.points_in().size(); ++x1) {
      out.values[x2] += apply_map(t.block(x2, x1), f.values[x1]);
    }
  }
  return out;
}

BigInverse inverse(const BigSuperoperator& t) {
  if (t.n_in() != t.n_out() || t.points_in().size() != t.points_out().size()) {
    throw Singular("inverse: big superoperator changes dimension");
  }
  Inverse inv = invert(t.to_matrix(), t.cfg());
  return {BigSuperoperator::from_matrix(t.points_out(), t.points_in(), t.n_out(), t.n_in(), inv.inverse, t.cfg()),
          inv.cond};
}

PointwiseRecoveryError::PointwiseRecoveryError(Kind kind, const std::string& detail, std::string point,
                                               std::optional<RecoveryStep> step)
    : std::runtime_error(detail), kind_(kind), point_(std::move(point)), step_(step) {}

std::string PointwiseRecoveryError::step_name() const {
  switch (kind_) {
    case Kind::dimension_mismatch: return "DimensionMismatch";
    case Kind::not_local: return "NotLocal";
    case Kind::phi_not_bijective: return "PhiNotBijective";
    case Kind::point_recovery: return step_ ? to_string(*step_) : "NotStandardForm";
  }
  return "Unknown";
}

std::set<std::string> support(const MatrixFunction& f, const FieldConfig& cfg) {
  double scale = 0.0;
  for (const auto& v : f.values) scale = std::max(scale, v.norm());
  std::set<std::string> out;
  if (scale <= cfg.tol_abs) return out;
  for (std::size_t x = 0; x < f.values.size(); ++x) {
    if (f.values[x].norm() > cfg.tol_rel * scale) out.insert(f.space.label(x));
  }
  return out;
}

bool ai_membership(const MatrixFunction& f, const FieldConfig& cfg) {
  for (const auto& v : f.values) {
    const int rank = numeric_rank(v, cfg);
    if (rank != 0 && rank != f.n) return false;
  }
  return true;
}

bool zero_product_iff_disjoint_support(const MatrixFunction& f1, const MatrixFunction& f2, const FieldConfig& cfg) {
  if (!ai_membership(f2, cfg)) throw std::invalid_argument("second function is not in the AI set");
  const auto product = f1 * f2;
  double scale = 0.0;
  for (std::size_t x = 0; x < f1.values.size(); ++x) {
    scale = std::max(scale, f1.values[x].norm() * f2.values[x].norm());
  }
  const bool product_zero = std::all_of(product.values.begin(), product.values.end(),
                                        [&](const Matrix& v) { return cfg.is_zero(v.norm(), scale); });
  const auto s1 = support(f1, cfg);
  const auto s2 = support(f2, cfg);
  const bool disjoint =
      std::none_of(s1.begin(), s1.end(), [&](const std::string& x) { return s2.contains(x); });
  if (product_zero != disjoint) {
    throw std::logic_error("EquivalenceViolated: zero product " + std::string(product_zero ? "holds" : "fails") +
                           " but supports are " + (disjoint ? "disjoint" : "intersecting"));
  }
  return product_zero;
}

namespace {

using ImageTable = std::vector<std::vector<std::vector<Matrix>>>;  // [x2][x1][basis]

ImageTable all_images(const BigSuperoperator& t) {
  ImageTable table(t.points_out().size());
  for (std::size_t x2 = 0; x2 < t.points_out().size(); ++x2) {
    for (std::size_t x1 = 0; x1 < t.points_in().size(); ++x1) table[x2].push_back(basis_images(t.block(x2, x1)));
  }
  return table;
}

double table_scale(const ImageTable& table) {
  double scale = 0.0;
  for (const auto& row : table) {
    for (const auto& imgs : row) scale = std::max(scale, product_scale(imgs));
  }
  return scale;
}

Counterexample lift(const BigSuperoperator& t, std::size_t xa, Matrix a, std::size_t xb, Matrix b, std::size_t xo) {
  const auto fa = MatrixFunction::delta(t.points_in(), xa, a);
  const auto fb = MatrixFunction::delta(t.points_in(), xb, b);
  Counterexample cx;
  cx.product_in_norm = (fa * fb).norm();
  cx.violation_norm = (apply_fn(t, fa) * apply_fn(t, fb)).norm();
  cx.a = std::move(a);
  cx.b = std::move(b);
  cx.points = PointLabels{t.points_in().label(xa), t.points_in().label(xb), t.points_out().label(xo)};
  return cx;
}

Eigen::Index strongest_basis(const std::vector<Matrix>& images) {
  Eigen::Index best = 0;
  double best_norm = -1.0;
  for (std::size_t j = 0; j < images.size(); ++j) {
    const double nrm = images[j].norm();
    if (nrm > best_norm) {
      best_norm = nrm;
      best = static_cast<Eigen::Index>(j);
    }
  }
  return best;
}

Matrix basis_matrix(Eigen::Index j, Eigen::Index n) {
  return matrix_unit(n, n, j % n, j / n);
}

}  // namespace

Verdict is_strictly_separating(const BigSuperoperator& t, const FieldConfig& cfg) {
  const std::size_t k_in = t.points_in().size();
  const std::size_t k_out = t.points_out().size();
  double scale = 0.0;
  for (std::size_t x2 = 0; x2 < k_out; ++x2) {
    for (std::size_t x1 = 0; x1 < k_in; ++x1) scale = std::max(scale, t.block(x2, x1).mat().norm());
  }
  auto reaches = [&](std::size_t x2, std::size_t x1) { return !cfg.is_zero(t.block(x2, x1).mat().norm(), scale); };

  Verdict verdict;
  for (std::size_t x1 = 0; x1 < k_in; ++x1) {
    for (std::size_t y1 = x1 + 1; y1 < k_in; ++y1) {
      for (std::size_t x2 = 0; x2 < k_out; ++x2) {
        if (!reaches(x2, x1) || !reaches(x2, y1)) continue;
        const Eigen::Index ja = strongest_basis(basis_images(t.block(x2, x1)));
        const Eigen::Index jb = strongest_basis(basis_images(t.block(x2, y1)));
        const auto fa = MatrixFunction::delta(t.points_in(), x1, basis_matrix(ja, t.n_in()));
        const auto fb = MatrixFunction::delta(t.points_in(), y1, basis_matrix(jb, t.n_in()));
        Counterexample cx;
        cx.a = fa.values[x1];
        cx.b = fb.values[y1];
        // pointwise norm product, identically zero for disjoint supports
        for (std::size_t x = 0; x < k_in; ++x) cx.product_in_norm += fa.values[x].norm() * fb.values[x].norm();
        cx.violation_norm = apply_fn(t, fa).values[x2].norm() * apply_fn(t, fb).values[x2].norm();
        cx.points = PointLabels{t.points_in().label(x1), t.points_in().label(y1), t.points_out().label(x2)};
        verdict.status = Status::not_separating;
        verdict.counterexample = std::move(cx);
        return verdict;
      }
    }
  }
  return verdict;
}

Verdict is_separating_fn(const BigSuperoperator& t, const FieldConfig& cfg) {
  const std::size_t k_in = t.points_in().size();
  const std::size_t k_out = t.points_out().size();
  const Eigen::Index n = t.n_in();
  const auto table = all_images(t);
  const double threshold = cfg.threshold(table_scale(table));

  Verdict verdict;
  // same input point: matrix-level quadric at each output point
  for (std::size_t x1 = 0; x1 < k_in; ++x1) {
    for (std::size_t x2 = 0; x2 < k_out; ++x2) {
      if (auto v = detail::find_quadric_violation(table[x2][x1], n, threshold)) {
        auto [a, b] = detail::witness_pair(*v, n);
        verdict.status = Status::not_separating;
        verdict.counterexample = lift(t, x1, std::move(a), x1, std::move(b), x2);
        return verdict;
      }
    }
  }

  // different input points: every product of images must vanish
  for (std::size_t x1 = 0; x1 < k_in; ++x1) {
    for (std::size_t y1 = 0; y1 < k_in; ++y1) {
      if (x1 == y1) continue;
      for (std::size_t x2 = 0; x2 < k_out; ++x2) {
        const auto& left = table[x2][x1];
        const auto& right = table[x2][y1];
        for (std::size_t ja = 0; ja < left.size(); ++ja) {
          for (std::size_t jb = 0; jb < right.size(); ++jb) {
            if ((left[ja] * right[jb]).cwiseAbs().maxCoeff() > threshold) {
              verdict.status = Status::not_separating;
              verdict.counterexample = lift(t, x1, basis_matrix(static_cast<Eigen::Index>(ja), n), y1,
                                            basis_matrix(static_cast<Eigen::Index>(jb), n), x2);
              return verdict;
            }
          }
        }
      }
    }
  }
  return verdict;
}

Verdict is_biseparating_fn(const BigSuperoperator& t, const FieldConfig& cfg) {
  Verdict verdict;
  std::optional<BigInverse> inv;
  try {
    inv = inverse(t);
  } catch (const Singular&) {
    verdict.status = Status::not_invertible;
    return verdict;
  }
  verdict = is_separating_fn(t, cfg);
  if (!verdict.passed()) {
    verdict.direction = Direction::forward;
    return verdict;
  }
  verdict = is_separating_fn(inv->map, cfg);
  if (!verdict.passed()) {
    verdict.direction = Direction::inverse;
    return verdict;
  }
  verdict.status = Status::biseparating;
  return verdict;
}

PointwiseForm recover_pointwise(const BigSuperoperator& t, const FieldConfig& cfg) {
  using Kind = PointwiseRecoveryError::Kind;
  if (t.n_in() != t.n_out()) {
    throw PointwiseRecoveryError(Kind::dimension_mismatch, "fiber dimensions differ: " + std::to_string(t.n_in()) +
                                                               " vs " + std::to_string(t.n_out()));
  }
  const std::size_t k_in = t.points_in().size();
  const std::size_t k_out = t.points_out().size();
  if (k_in != k_out) {
    throw PointwiseRecoveryError(Kind::phi_not_bijective, "no bijection between " + std::to_string(k_out) +
                                                              " and " + std::to_string(k_in) + " points");
  }

  double scale = 0.0;
  for (std::size_t x2 = 0; x2 < k_out; ++x2) {
    for (std::size_t x1 = 0; x1 < k_in; ++x1) scale = std::max(scale, t.block(x2, x1).mat().norm());
  }

  PointwiseForm form;
  std::vector<bool> hit(k_in, false);
  for (std::size_t x2 = 0; x2 < k_out; ++x2) {
    std::vector<std::size_t> nonzero;
    for (std::size_t x1 = 0; x1 < k_in; ++x1) {
      if (!cfg.is_zero(t.block(x2, x1).mat().norm(), scale)) nonzero.push_back(x1);
    }
    const auto& label = t.points_out().label(x2);
    if (nonzero.size() != 1) {
      throw PointwiseRecoveryError(Kind::not_local,
                                   "point " + label + " depends on " + std::to_string(nonzero.size()) + " input points",
                                   label);
    }
    if (hit[nonzero.front()]) {
      throw PointwiseRecoveryError(Kind::phi_not_bijective,
                                   "input point " + t.points_in().label(nonzero.front()) + " is used twice", label);
    }
    hit[nonzero.front()] = true;
    form.phi.push_back(nonzero.front());
  }

  for (std::size_t x2 = 0; x2 < k_out; ++x2) {
    const auto& label = t.points_out().label(x2);
    try {
      auto local = recover_conjugation(t.block(x2, form.phi[x2]), cfg);
      form.alpha.push_back(local.alpha);
      form.s.push_back(std::move(local.s));
    } catch (const RecoveryError& e) {
      throw PointwiseRecoveryError(Kind::point_recovery, "at " + label + ": " + e.what(), label, e.step());
    }
  }

  double cond = 1.0;
  for (const auto& s : form.s) cond = std::max(cond, invert(s, cfg).cond);
  const double residual = verify_pointwise(t, form, cfg);
  if (residual > cfg.tol_rel * cond) {
    throw PointwiseRecoveryError(Kind::point_recovery, "pointwise residual " + std::to_string(residual) +
                                                           " above tolerance",
                                 {}, RecoveryStep::not_standard_form);
  }
  return form;
}

double verify_pointwise(const BigSuperoperator& t, const PointwiseForm& form, const FieldConfig& cfg) {
  const std::size_t k_in = t.points_in().size();
  const std::size_t k_out = t.points_out().size();
  const Eigen::Index n = t.n_in();
  if (form.phi.size() != k_out || form.alpha.size() != k_out || form.s.size() != k_out || t.n_out() != n) {
    throw RecoveryError(RecoveryStep::dimension_mismatch, "pointwise form does not match the map");
  }

  double max_image = 0.0;
  double max_diff = 0.0;
  for (std::size_t x2 = 0; x2 < k_out; ++x2) {
    if (form.phi[x2] >= k_in) throw RecoveryError(RecoveryStep::dimension_mismatch, "phi points outside the domain");
    const Matrix s_inv = invert(form.s[x2], cfg).inverse;
    for (std::size_t x1 = 0; x1 < k_in; ++x1) {
      const auto images = basis_images(t.block(x2, x1));
      const bool on_phi = x1 == form.phi[x2];
      for (Eigen::Index q = 0; q < n; ++q) {
        for (Eigen::Index p = 0; p < n; ++p) {
          const Matrix& img = images[vec_index(p, q, n)];
          max_image = std::max(max_image, img.norm());
          if (on_phi) {
            const Matrix expected = form.alpha[x2] * form.s[x2].col(p) * s_inv.row(q);
            max_diff = std::max(max_diff, (img - expected).norm());
          } else {
            max_diff = std::max(max_diff, img.norm());
          }
        }
      }
    }
  }
  if (max_image <= cfg.tol_abs) throw RecoveryError(RecoveryStep::degenerate_map, "every block image is zero");
  return max_diff / max_image;
}

}  // namespace bisep
