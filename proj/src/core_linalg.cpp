#include "bisep/core_linalg.hpp"

#include <cmath>

namespace bisep {

const char* to_string(Field field) {
  return field == Field::real ? "real" : "complex";
}

Field field_from_string(const std::string& name) {
  if (name == "real") return Field::real;
  if (name == "complex") return Field::complex;
  throw std::invalid_argument("unknown field '" + name + "'");
}

FieldConfig::FieldConfig(Field f, double rel, double abs) : field(f), tol_rel(rel), tol_abs(abs) {
  if (!(rel > 0.0) || !(abs > 0.0) || !std::isfinite(rel) || !std::isfinite(abs)) {
    throw std::invalid_argument("tolerances must be positive and finite");
  }
}

Scalar Covector::operator()(const Vector& v) const {
  if (v.size() != coeffs.size()) {
    throw DimensionMismatch("covector of dim " + std::to_string(coeffs.size()) +
                            " applied to vector of dim " + std::to_string(v.size()));
  }
  // transpose, not adjoint: the pairing is bilinear
  return (coeffs.transpose() * v)(0, 0);
}

Matrix outer(const Vector& u, const Covector& f) {
  if (u.size() != f.dim()) {
    throw DimensionMismatch("outer: vector dim " + std::to_string(u.size()) + " vs covector dim " +
                            std::to_string(f.dim()));
  }
  return u * f.coeffs.transpose();
}

Eigen::VectorXd singular_values(const Matrix& a, const FieldConfig& cfg) {
  if (a.size() == 0) return Eigen::VectorXd();
  if (cfg.field == Field::real) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.real());
    return svd.singularValues();
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

namespace {

int rank_from_singular_values(const Eigen::VectorXd& sv, const FieldConfig& cfg) {
  if (sv.size() == 0 || sv(0) <= cfg.tol_abs) return 0;
  const double cut = cfg.tol_rel * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
  }
  return rank;
}

}  // namespace

int numeric_rank(const Matrix& a, const FieldConfig& cfg) {
  return rank_from_singular_values(singular_values(a, cfg), cfg);
}

Scalar normalize_phase(Vector& v, double tol_abs) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mod = std::abs(v(k));
    if (mod > tol_abs) {
      const Scalar phase = v(k) / mod;
      v /= phase;
      v(k) = Scalar(v(k).real(), 0.0);
      return phase;
    }
  }
  return Scalar(1.0, 0.0);
}

RankOneFactor rank_one_factor(const Matrix& a, const FieldConfig& cfg) { return rank_one_factor(a, cfg, -1.0); }

RankOneFactor rank_one_factor(const Matrix& a, const FieldConfig& cfg, double scale) {
  if (a.rows() != a.cols()) throw DimensionMismatch("rank_one_factor expects a square matrix");

  Vector left;
  Vector right;  // the covector, as a column
  Eigen::VectorXd sv;
  if (cfg.field == Field::real) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    sv = svd.singularValues();
    if (sv.size() > 0) {
      left = svd.matrixU().col(0).cast<Scalar>();
      right = svd.matrixV().col(0).cast<Scalar>();
    }
  } else {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    sv = svd.singularValues();
    if (sv.size() > 0) {
      left = svd.matrixU().col(0);
      // A = s u v^H, so the bilinear covector is conj(v)
      right = svd.matrixV().col(0).conjugate();
    }
  }
  if (sv.size() == 0 || sv(0) <= cfg.tol_abs) throw ZeroMatrix("rank_one_factor: matrix is zero");
  const double against = scale < 0.0 ? sv(0) : std::max(scale, sv(0));
  if (sv.size() > 1 && sv(1) > cfg.tol_rel * against) {
    throw NotRankOne("rank_one_factor: second singular value " + std::to_string(sv(1)) +
                     " exceeds tolerance against " + std::to_string(against));
  }

  right.normalize();
  const Scalar phase = normalize_phase(right, cfg.tol_abs);
  RankOneFactor out;
  out.u = left * (sv(0) * phase);
  snap_to_field(out.u, cfg);
  snap_to_field(right, cfg);
  out.f = Covector(std::move(right));
  return out;
}

Inverse invert(const Matrix& a, const FieldConfig& cfg) {
  if (a.rows() != a.cols()) throw DimensionMismatch("invert expects a square matrix");
  const auto sv = singular_values(a, cfg);
  const int rank = rank_from_singular_values(sv, cfg);
  if (rank < a.rows()) {
    throw Singular("matrix is singular (numeric rank " + std::to_string(rank) + " < " +
                   std::to_string(a.rows()) + ")");
  }
  Inverse out;
  out.cond = sv(0) / sv(sv.size() - 1);
  out.inverse = a.partialPivLu().inverse();
  snap_to_field(out.inverse, cfg);
  return out;
}

std::vector<Vector> kernel_basis(const Matrix& a, const FieldConfig& cfg) {
  std::vector<Vector> basis;
  const Eigen::Index cols = a.cols();
  if (cols == 0) return basis;
  if (a.rows() == 0) {
    for (Eigen::Index j = 0; j < cols; ++j) basis.push_back(basis_vector(cols, j));
    return basis;
  }

  Matrix v;
  Eigen::VectorXd sv;
  if (cfg.field == Field::real) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.real(), Eigen::ComputeFullV);
    v = svd.matrixV().cast<Scalar>();
    sv = svd.singularValues();
  } else {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    v = svd.matrixV();
    sv = svd.singularValues();
  }
  const int rank = rank_from_singular_values(sv, cfg);
  for (Eigen::Index j = rank; j < cols; ++j) basis.push_back(v.col(j));
  return basis;
}

Matrix matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index p, Eigen::Index q) {
  Matrix e = Matrix::Zero(rows, cols);
  e(p, q) = 1.0;
  return e;
}

Vector basis_vector(Eigen::Index dim, Eigen::Index i) {
  Vector e = Vector::Zero(dim);
  e(i) = 1.0;
  return e;
}

void require_finite(const Matrix& a, const std::string& what) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) {
        throw NonFinite(what + ": non-finite entry at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      }
    }
  }
}

void snap_to_field(Matrix& a, const FieldConfig& cfg) {
  if (cfg.field == Field::real) a = a.real().cast<Scalar>();
}

void snap_to_field(Vector& v, const FieldConfig& cfg) {
  if (cfg.field == Field::real) v = v.real().cast<Scalar>();
}

Scalar snap_to_field(Scalar s, const FieldConfig& cfg) {
  return cfg.field == Field::real ? Scalar(s.real(), 0.0) : s;
}

}  // namespace bisep
