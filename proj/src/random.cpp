#include "bisep/random.hpp"

#include <cmath>
#include <numbers>

namespace bisep {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; 1 - u keeps the logarithm argument in (0, 1]
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::size_t Rng::index(std::size_t bound) {
  if (bound == 0) return 0;
  return static_cast<std::size_t>(uniform() * static_cast<double>(bound)) % bound;
}

Scalar Rng::scalar(Field field) {
  if (field == Field::real) return Scalar(normal(), 0.0);
  const double re = normal();
  const double im = normal();
  return Scalar(re, im) / std::sqrt(2.0);
}

Matrix Rng::matrix(Eigen::Index rows, Eigen::Index cols, Field field) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scalar(field);
  }
  return m;
}

Vector Rng::vector(Eigen::Index dim, Field field) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = scalar(field);
  return v;
}

Scalar Rng::phase(Field field) {
  if (field == Field::real) return uniform() < 0.5 ? Scalar(-1.0) : Scalar(1.0);
  return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi));
}

std::vector<std::size_t> Rng::permutation(std::size_t k) {
  std::vector<std::size_t> p(k);
  for (std::size_t i = 0; i < k; ++i) p[i] = i;
  for (std::size_t i = k; i > 1; --i) {
    const std::size_t j = index(i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace bisep
