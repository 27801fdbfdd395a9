#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bisep/core_linalg.hpp"

namespace bisep {

// Seeded generator whose output depends only on the mt19937_64 engine, which
// the standard pins bit-for-bit. Uniform and Gaussian draws are derived here
// rather than through <random> distributions, whose algorithms vary between
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  std::size_t index(std::size_t bound);     // [0, bound)

  // Gaussian entries; imaginary parts are drawn only for the complex field.
  Scalar scalar(Field field);
  Matrix matrix(Eigen::Index rows, Eigen::Index cols, Field field);
  Vector vector(Eigen::Index dim, Field field);

  // Uniformly random unit-modulus scalar (a sign for the real field).
  Scalar phase(Field field);

  std::vector<std::size_t> permutation(std::size_t k);

  // Independent child stream.
  Rng fork() { return Rng(next()); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bisep
