#include "bisep/structure.hpp"

#include <algorithm>
#include <cmath>

#include "bisep/random.hpp"

namespace bisep {

namespace {

constexpr std::uint64_t kRankProbeSeed = 0x5eed'0001;
constexpr int kRankProbeCount = 20;

}  // namespace

const char* to_string(RecoveryStep step) {
  switch (step) {
    case RecoveryStep::dimension_mismatch: return "DimensionMismatch";
    case RecoveryStep::not_rank_one_preserving: return "NotRankOnePreserving";
    case RecoveryStep::not_factorizable: return "NotFactorizable";
    case RecoveryStep::not_invertible_s: return "NotInvertibleS";
    case RecoveryStep::not_standard_form: return "NotStandardForm";
    case RecoveryStep::degenerate_map: return "DegenerateMap";
  }
  return "Unknown";
}

RecoveryError::RecoveryError(RecoveryStep step, const std::string& detail, std::optional<double> residual)
    : std::runtime_error(std::string(to_string(step)) + ": " + detail), step_(step), residual_(residual) {}

Matrix gauge_normalize(const Matrix& s, const FieldConfig& cfg) {
  const double norm = s.norm();
  if (norm <= cfg.tol_abs) throw RecoveryError(RecoveryStep::not_invertible_s, "S is zero");
  // every nonzero 1x1 S lands on [1]; skip the rounding of scale and phase
  if (s.size() == 1) return Matrix::Identity(1, 1);
  Vector v = vectorize(s) * (std::sqrt(static_cast<double>(s.rows())) / norm);
  normalize_phase(v, cfg.tol_abs);
  Matrix out = unvectorize(v, s.rows());
  snap_to_field(out, cfg);
  return out;
}

namespace {

double largest_image(const std::vector<Matrix>& images) {
  double scale = 0.0;
  for (const auto& img : images) scale = std::max(scale, img.norm());
  return scale;
}

// Rank one with noise measured against scale: sigma_1 clears the threshold and
// sigma_2 stays under it.
bool rank_one_at(const Matrix& img, const FieldConfig& cfg, double scale) {
  const auto sv = singular_values(img, cfg);
  if (sv.size() == 0 || sv(0) <= cfg.threshold(scale)) return false;
  return sv.size() == 1 || sv(1) <= cfg.threshold(scale);
}

}  // namespace

bool check_rank_one_preserving(const Superoperator& t, const FieldConfig& cfg) {
  const auto images = basis_images(t);
  const double scale = largest_image(images);
  for (const auto& img : images) {
    if (!rank_one_at(img, cfg, scale)) return false;
  }
  Rng rng(kRankProbeSeed);
  const Eigen::Index n = t.n_in();
  for (int k = 0; k < kRankProbeCount; ++k) {
    const Vector u = rng.vector(n, cfg.field);
    const Covector f(rng.vector(n, cfg.field));
    // ||T(u (x) f)|| <= scale * ||u||_1 * ||f||_1
    const double probe_scale = scale * u.lpNorm<1>() * f.coeffs.lpNorm<1>();
    if (!rank_one_at(apply_map(t, outer(u, f)), cfg, probe_scale)) return false;
  }
  return true;
}

ConjugationForm recover_conjugation(const Superoperator& t, const FieldConfig& cfg) {
  if (t.n_in() != t.n_out()) {
    throw RecoveryError(RecoveryStep::dimension_mismatch,
                        "map M_" + std::to_string(t.n_in()) + " -> M_" + std::to_string(t.n_out()));
  }
  const Eigen::Index n = t.n_in();

  if (n == 1) {
    const Scalar alpha = snap_to_field(t.mat()(0, 0), cfg);
    if (std::abs(alpha) <= cfg.tol_abs) {
      throw RecoveryError(RecoveryStep::not_rank_one_preserving, "1x1 map is zero");
    }
    return {alpha, Matrix::Identity(1, 1)};
  }

  if (!check_rank_one_preserving(t, cfg)) {
    throw RecoveryError(RecoveryStep::not_rank_one_preserving, "some rank-one input has an image of rank != 1");
  }

  const auto images = basis_images(t);
  // Every gate below measures noise against the largest basis image, the
  // scale that verify_form and the separating check also use. A small image
  // next to a large one would otherwise fail on noise the residual tolerates.
  const double map_scale = largest_image(images);
  const Covector f = rank_one_factor(images[vec_index(0, 0, n)], cfg, map_scale).f;
  Eigen::Index w = 0;
  f.coeffs.cwiseAbs().maxCoeff(&w);  // first index on ties
  const Scalar fw = f.coeffs(w);

  // Every T(E_i1) must factor through the same covector f; its column factor
  // T(E_i1) e_w / f(e_w) becomes column i of S.
  Matrix s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Matrix& img = images[vec_index(i, 0, n)];
    s.col(i) = img.col(w) / fw;
    const double mismatch = (img - outer(s.col(i), f)).norm();
    if (!cfg.is_zero(mismatch, map_scale)) {
      throw RecoveryError(RecoveryStep::not_factorizable,
                          "T(E_" + std::to_string(i + 1) + "1) does not share the covector of T(E_11)");
    }
  }

  double cond = 1.0;
  try {
    cond = invert(s, cfg).cond;
  } catch (const Singular& e) {
    throw RecoveryError(RecoveryStep::not_invertible_s, e.what());
  }

  Matrix t_identity = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) t_identity += images[vec_index(i, i, n)];
  const Scalar alpha = snap_to_field(t_identity.trace() / static_cast<double>(n), cfg);
  const double off_scalar = (t_identity - alpha * Matrix::Identity(n, n)).norm();
  if (!cfg.is_zero(off_scalar, std::max(t_identity.norm(), map_scale))) {
    throw RecoveryError(RecoveryStep::not_standard_form, "T(I) is not a multiple of I");
  }
  if (std::abs(alpha) <= cfg.tol_abs) {
    throw RecoveryError(RecoveryStep::not_standard_form, "T(I) = 0, so alpha would vanish");
  }

  ConjugationForm form{alpha, gauge_normalize(s, cfg)};
  const double residual = verify_form(t, form, cfg);
  // Rounding in S^{-1} grows with cond(S); accept relative to it.
  if (residual > cfg.tol_rel * std::max(1.0, cond)) {
    throw RecoveryError(RecoveryStep::not_standard_form,
                        "residual " + std::to_string(residual) + " above tolerance", residual);
  }
  return form;
}

double verify_form(const Superoperator& t, const ConjugationForm& form, const FieldConfig& cfg) {
  const Eigen::Index n = t.n_in();
  if (t.n_out() != n || form.s.rows() != n || form.s.cols() != n) {
    throw RecoveryError(RecoveryStep::dimension_mismatch, "form and map shapes differ");
  }
  Matrix s_inv;
  try {
    s_inv = invert(form.s, cfg).inverse;
  } catch (const Singular& e) {
    throw RecoveryError(RecoveryStep::not_invertible_s, e.what());
  }

  const auto images = basis_images(t);
  double max_image = 0.0;
  double max_diff = 0.0;
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index p = 0; p < n; ++p) {
      const Matrix& img = images[vec_index(p, q, n)];
      // alpha * S E_pq S^{-1} = alpha * S_{:,p} (S^{-1})_{q,:}
      const Matrix expected = form.alpha * form.s.col(p) * s_inv.row(q);
      max_image = std::max(max_image, img.norm());
      max_diff = std::max(max_diff, (img - expected).norm());
    }
  }
  if (max_image <= cfg.tol_abs) {
    throw RecoveryError(RecoveryStep::degenerate_map, "every basis image is zero");
  }
  return max_diff / max_image;
}

PsiMap psi_of(const ConjugationForm& form, const FieldConfig& cfg) {
  const Matrix s_inv = invert(form.s, cfg).inverse;
  return {form.alpha * s_inv.transpose()};
}

}  // namespace bisep
