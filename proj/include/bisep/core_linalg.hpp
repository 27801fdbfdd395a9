#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bisep {

// All arithmetic runs on complex doubles. A real field keeps every imaginary
// part at exactly zero; the field tag decides how values are generated,
// factored and serialized.
using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Field { real, complex };

const char* to_string(Field field);
Field field_from_string(const std::string& name);

// Tolerance policy shared by every module. "x is zero at scale s" means
// |x| <= tol_abs + tol_rel * s.
struct FieldConfig {
  Field field = Field::real;
  double tol_rel = 1e-9;
  double tol_abs = 1e-12;

  FieldConfig() = default;
  FieldConfig(Field f, double rel, double abs);

  double threshold(double scale) const { return tol_abs + tol_rel * scale; }
  bool is_zero(double magnitude, double scale) const { return magnitude <= threshold(scale); }
};

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public LinalgError {
 public:
  using LinalgError::LinalgError;
};

class NotRankOne : public LinalgError {
 public:
  using LinalgError::LinalgError;
};

class ZeroMatrix : public LinalgError {
 public:
  using LinalgError::LinalgError;
};

class Singular : public LinalgError {
 public:
  using LinalgError::LinalgError;
};

class NonFinite : public LinalgError {
 public:
  using LinalgError::LinalgError;
};

// A linear functional acting by the bilinear pairing f(v) = sum_a f_a v_a.
// No conjugation is applied, even over the complex field.
struct Covector {
  Vector coeffs;

  Covector() = default;
  explicit Covector(Vector c) : coeffs(std::move(c)) {}

  Eigen::Index dim() const { return coeffs.size(); }
  Scalar operator()(const Vector& v) const;
};

// u (x) f, normalized so that ||f||_2 = 1 and the first entry of f with
// modulus above tol_abs is real positive.
struct RankOneFactor {
  Vector u;
  Covector f;
};

Matrix outer(const Vector& u, const Covector& f);

RankOneFactor rank_one_factor(const Matrix& a, const FieldConfig& cfg);
// Same, but sigma_2 is compared with tol_rel * scale rather than
// tol_rel * sigma_1, for matrices judged against a larger surrounding scale.
RankOneFactor rank_one_factor(const Matrix& a, const FieldConfig& cfg, double scale);

// Singular values in descending order. Real-field matrices are decomposed in
// real arithmetic.
Eigen::VectorXd singular_values(const Matrix& a, const FieldConfig& cfg);

int numeric_rank(const Matrix& a, const FieldConfig& cfg);

struct Inverse {
  Matrix inverse;
  double cond = 1.0;
};

Inverse invert(const Matrix& a, const FieldConfig& cfg);

// Orthonormal null-space basis of a.
std::vector<Vector> kernel_basis(const Matrix& a, const FieldConfig& cfg);

Matrix matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index p, Eigen::Index q);
Vector basis_vector(Eigen::Index dim, Eigen::Index i);

// Throws NonFinite when any entry is NaN or infinite.
void require_finite(const Matrix& a, const std::string& what);

// Zeroes imaginary parts when the field is real.
void snap_to_field(Matrix& a, const FieldConfig& cfg);
void snap_to_field(Vector& v, const FieldConfig& cfg);
Scalar snap_to_field(Scalar s, const FieldConfig& cfg);

// Rescales v by a unit-modulus factor so that its first entry with modulus
// above tol_abs is real positive. Returns the factor that was divided out.
Scalar normalize_phase(Vector& v, double tol_abs);

}  // namespace bisep
