#include "bisep/superop.hpp"

#include <cmath>

namespace bisep {

Vector vectorize(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unvectorize(const Vector& v, Eigen::Index n) {
  if (v.size() != n * n) throw DimensionMismatch("unvectorize: length is not n^2");
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

Superoperator::Superoperator(Eigen::Index n_in, Eigen::Index n_out, Matrix mat, FieldConfig cfg)
    : n_in_(n_in), n_out_(n_out), mat_(std::move(mat)), cfg_(cfg) {
  if (n_in < 1 || n_out < 1) throw DimensionMismatch("superoperator dimensions must be positive");
  if (mat_.rows() != n_out * n_out || mat_.cols() != n_in * n_in) {
    throw DimensionMismatch("superoperator matrix is " + std::to_string(mat_.rows()) + "x" +
                            std::to_string(mat_.cols()) + ", expected " +
                            std::to_string(n_out * n_out) + "x" + std::to_string(n_in * n_in));
  }
  require_finite(mat_, "superoperator");
}

Superoperator Superoperator::identity(Eigen::Index n, FieldConfig cfg) {
  return Superoperator(n, n, Matrix::Identity(n * n, n * n), cfg);
}

Superoperator Superoperator::zero(Eigen::Index n_in, Eigen::Index n_out, FieldConfig cfg) {
  return Superoperator(n_in, n_out, Matrix::Zero(n_out * n_out, n_in * n_in), cfg);
}

Matrix apply_map(const Superoperator& t, const Matrix& a) {
  if (a.rows() != t.n_in() || a.cols() != t.n_in()) {
    throw DimensionMismatch("apply_map: input is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", superoperator expects " +
                            std::to_string(t.n_in()) + "x" + std::to_string(t.n_in()));
  }
  return unvectorize(t.mat() * vectorize(a), t.n_out());
}

std::vector<Matrix> basis_images(const Superoperator& t) {
  std::vector<Matrix> images;
  images.reserve(static_cast<std::size_t>(t.mat().cols()));
  for (Eigen::Index j = 0; j < t.mat().cols(); ++j) {
    images.push_back(unvectorize(t.mat().col(j), t.n_out()));
  }
  return images;
}

Superoperator from_basis_images(std::span<const Matrix> images, const FieldConfig& cfg) {
  const auto count = static_cast<Eigen::Index>(images.size());
  const auto n_in = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(count))));
  if (count == 0 || n_in * n_in != count) {
    throw DimensionMismatch("from_basis_images: " + std::to_string(count) +
                            " images is not a positive perfect square");
  }
  const Eigen::Index n_out = images.front().rows();
  Matrix mat(n_out * n_out, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Matrix& img = images[static_cast<std::size_t>(j)];
    if (img.rows() != n_out || img.cols() != n_out) {
      throw DimensionMismatch("from_basis_images: image " + std::to_string(j) + " has shape " +
                              std::to_string(img.rows()) + "x" + std::to_string(img.cols()));
    }
    mat.col(j) = vectorize(img);
  }
  return Superoperator(n_in, n_out, std::move(mat), cfg);
}

Superoperator compose(const Superoperator& outer_map, const Superoperator& inner_map) {
  if (inner_map.n_out() != outer_map.n_in()) {
    throw DimensionMismatch("compose: inner output dim " + std::to_string(inner_map.n_out()) +
                            " != outer input dim " + std::to_string(outer_map.n_in()));
  }
  return Superoperator(inner_map.n_in(), outer_map.n_out(), outer_map.mat() * inner_map.mat(),
                       outer_map.cfg());
}

SuperopInverse inverse(const Superoperator& t) {
  if (t.n_in() != t.n_out()) throw Singular("inverse: superoperator changes dimension");
  Inverse inv = invert(t.mat(), t.cfg());
  return {Superoperator(t.n_out(), t.n_in(), std::move(inv.inverse), t.cfg()), inv.cond};
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Superoperator conjugation_superop(Scalar alpha, const Matrix& s, const FieldConfig& cfg) {
  if (std::abs(alpha) <= cfg.tol_abs) {
    throw std::invalid_argument("conjugation_superop: alpha is zero at tolerance");
  }
  if (s.rows() != s.cols()) throw DimensionMismatch("conjugation_superop: S must be square");
  const Matrix s_inv = invert(s, cfg).inverse;
  // vec(S A S^{-1}) = (S^{-T} (x) S) vec(A)
  Matrix mat = alpha * kron(s_inv.transpose(), s);
  snap_to_field(mat, cfg);
  return Superoperator(s.rows(), s.rows(), std::move(mat), cfg);
}

}  // namespace bisep
