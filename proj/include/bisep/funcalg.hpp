#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bisep/core_linalg.hpp"
#include "bisep/separating.hpp"
#include "bisep/structure.hpp"
#include "bisep/superop.hpp"

namespace bisep {

// A finite discrete point set. Finite discrete spaces are compact, so the
// function algebra over them is the direct sum of one matrix algebra per point.
class DiscreteSpace {
 public:
  explicit DiscreteSpace(std::vector<std::string> labels);

  // Labels x1, x2, ... (or another prefix).
  static DiscreteSpace numbered(std::size_t k, const std::string& prefix = "x");

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t index_of(const std::string& label) const;

  bool operator==(const DiscreteSpace&) const = default;

 private:
  std::vector<std::string> labels_;
};

struct MatrixFunction {
  DiscreteSpace space;
  Eigen::Index n;
  std::vector<Matrix> values;

  MatrixFunction(DiscreteSpace space, Eigen::Index n, std::vector<Matrix> values);

  static MatrixFunction zero(const DiscreteSpace& space, Eigen::Index n);
  // value at point index x, zero elsewhere
  static MatrixFunction delta(const DiscreteSpace& space, std::size_t x, const Matrix& value);

  MatrixFunction operator*(const MatrixFunction& other) const;
  double norm() const;
};

// Linear map C(X1, M_n) -> C(X2, M_m). blocks[x2][x1] carries the value at x1
// to its contribution at x2.
class BigSuperoperator {
 public:
  BigSuperoperator(DiscreteSpace points_in, DiscreteSpace points_out, Eigen::Index n_in,
                   Eigen::Index n_out, std::vector<std::vector<Superoperator>> blocks, FieldConfig cfg = {});

  static BigSuperoperator zero(DiscreteSpace points_in, DiscreteSpace points_out, Eigen::Index n_in,
                               Eigen::Index n_out, FieldConfig cfg = {});

  // Inverse of to_matrix. Rows ordered by (x2, vec index), columns by (x1, vec index).
  static BigSuperoperator from_matrix(DiscreteSpace points_in, DiscreteSpace points_out,
                                      Eigen::Index n_in, Eigen::Index n_out, const Matrix& mat,
                                      FieldConfig cfg = {});

  const DiscreteSpace& points_in() const { return points_in_; }
  const DiscreteSpace& points_out() const { return points_out_; }
  Eigen::Index n_in() const { return n_in_; }
  Eigen::Index n_out() const { return n_out_; }
  const FieldConfig& cfg() const { return cfg_; }
  const Superoperator& block(std::size_t x2, std::size_t x1) const { return blocks_.at(x2).at(x1); }

  Matrix to_matrix() const;

 private:
  DiscreteSpace points_in_;
  DiscreteSpace points_out_;
  Eigen::Index n_in_;
  Eigen::Index n_out_;
  std::vector<std::vector<Superoperator>> blocks_;
  FieldConfig cfg_;
};

MatrixFunction apply_fn(const BigSuperoperator& t, const MatrixFunction& f);

struct BigInverse {
  BigSuperoperator map;
  double cond;
};

// Throws Singular when t is not a bijection at tolerance.
BigInverse inverse(const BigSuperoperator& t);

// (T F)(x) = alpha(x) S_x F(phi(x)) S_x^{-1}. phi[x2] is an index into the
// input space.
struct PointwiseForm {
  std::vector<std::size_t> phi;
  std::vector<Scalar> alpha;
  std::vector<Matrix> s;
};

class PointwiseRecoveryError : public std::runtime_error {
 public:
  enum class Kind { dimension_mismatch, not_local, phi_not_bijective, point_recovery };

  PointwiseRecoveryError(Kind kind, const std::string& detail, std::string point = {},
                         std::optional<RecoveryStep> step = {});

  Kind kind() const { return kind_; }
  const std::string& point() const { return point_; }
  std::optional<RecoveryStep> step() const { return step_; }
  // DimensionMismatch, NotLocal, PhiNotBijective, or the per-point step name
  std::string step_name() const;

 private:
  Kind kind_;
  std::string point_;
  std::optional<RecoveryStep> step_;
};

std::set<std::string> support(const MatrixFunction& f, const FieldConfig& cfg);

// Membership in {H : G H = 0 implies H G = 0 for every G}, which over finite
// points is "every value is zero or invertible".
bool ai_membership(const MatrixFunction& f, const FieldConfig& cfg);

// For f2 in the AI set: f1 * f2 = 0 iff the supports are disjoint. Returns
// the common truth value; throws std::logic_error if the two sides disagree
// and std::invalid_argument if f2 is not an AI member.
bool zero_product_iff_disjoint_support(const MatrixFunction& f1, const MatrixFunction& f2,
                                       const FieldConfig& cfg);

// Disjointly supported inputs must have disjointly supported images. Decided
// through block reach: reach(x1) = {x2 : ||blocks[x2][x1]||_F > tol * scale}
// must be pairwise disjoint, scale being the largest block norm.
Verdict is_strictly_separating(const BigSuperoperator& t, const FieldConfig& cfg);

// Separating for the pointwise product: images of functions supported at
// different points multiply to zero, and at each input point the map into
// functions passes the matrix-level quadric test at every output point.
Verdict is_separating_fn(const BigSuperoperator& t, const FieldConfig& cfg);

// Invertible with separating map and inverse.
Verdict is_biseparating_fn(const BigSuperoperator& t, const FieldConfig& cfg);

PointwiseForm recover_pointwise(const BigSuperoperator& t, const FieldConfig& cfg);

// Largest of the on-phi mismatch ||T(delta_phi(x) E_ij)(x) - alpha S E_ij S^{-1}||
// and the off-phi block image norms, divided by the largest block image norm.
double verify_pointwise(const BigSuperoperator& t, const PointwiseForm& form, const FieldConfig& cfg);

}  // namespace bisep
