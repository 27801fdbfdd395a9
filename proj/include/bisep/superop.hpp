#pragma once

#include <span>
#include <vector>

#include "bisep/core_linalg.hpp"

namespace bisep {

// Column-major vectorization: entry (p, q) of an n x n matrix sits at index
// q * n + p. This is the only convention used anywhere in the library and the
// only one accepted in instance files.
constexpr Eigen::Index vec_index(Eigen::Index p, Eigen::Index q, Eigen::Index n) { return q * n + p; }

Vector vectorize(const Matrix& a);
Matrix unvectorize(const Vector& v, Eigen::Index n);

// A linear map M_{n_in} -> M_{n_out}, stored as the n_out^2 x n_in^2 matrix
// acting on vectorized inputs. Immutable after construction.
class Superoperator {
 public:
  Superoperator(Eigen::Index n_in, Eigen::Index n_out, Matrix mat, FieldConfig cfg = {});

  static Superoperator identity(Eigen::Index n, FieldConfig cfg = {});
  static Superoperator zero(Eigen::Index n_in, Eigen::Index n_out, FieldConfig cfg = {});

  Eigen::Index n_in() const { return n_in_; }
  Eigen::Index n_out() const { return n_out_; }
  const Matrix& mat() const { return mat_; }
  const FieldConfig& cfg() const { return cfg_; }

 private:
  Eigen::Index n_in_;
  Eigen::Index n_out_;
  Matrix mat_;
  FieldConfig cfg_;
};

Matrix apply_map(const Superoperator& t, const Matrix& a);

// Images of the matrix units E_pq, ordered by column-major basis index.
std::vector<Matrix> basis_images(const Superoperator& t);

Superoperator from_basis_images(std::span<const Matrix> images, const FieldConfig& cfg);

// outer_map after inner_map.
Superoperator compose(const Superoperator& outer_map, const Superoperator& inner_map);

struct SuperopInverse {
  Superoperator map;
  double cond;
};

// Throws Singular when t is not a bijection at tolerance.
SuperopInverse inverse(const Superoperator& t);

// A -> alpha * S * A * S^{-1}.
Superoperator conjugation_superop(Scalar alpha, const Matrix& s, const FieldConfig& cfg);

// Entrywise Kronecker product.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace bisep
