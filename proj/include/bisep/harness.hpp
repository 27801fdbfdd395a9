#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "bisep/funcalg.hpp"
#include "bisep/separating.hpp"
#include "bisep/structure.hpp"
#include "bisep/superop.hpp"

namespace bisep {

struct AlphaRange {
  double lo = 0.5;
  double hi = 2.0;
};

inline constexpr double kDefaultCondCap = 100.0;

using GroundTruth = std::variant<std::monostate, ConjugationForm, PointwiseForm>;
using AnyMap = std::variant<Superoperator, BigSuperoperator>;

struct InstanceBundle {
  std::string description;
  GroundTruth ground_truth;
  AnyMap map;
  std::uint64_t seed = 0;

  const Superoperator& superop() const { return std::get<Superoperator>(map); }
  const BigSuperoperator& big() const { return std::get<BigSuperoperator>(map); }
};

// alpha * S * A * S^{-1} with |alpha| drawn from alpha_range (random sign or
// phase) and S resampled until cond(S) <= cond_cap. cond_cap <= 1 forces S = I.
InstanceBundle gen_conjugation(Eigen::Index n, std::uint64_t seed, AlphaRange alpha_range = {},
                               double cond_cap = kDefaultCondCap, const FieldConfig& cfg = {});

// Random permutation phi with one conjugation block per output point.
InstanceBundle gen_pointwise(std::size_t k, Eigen::Index n, std::uint64_t seed, AlphaRange alpha_range = {},
                             double cond_cap = kDefaultCondCap, const FieldConfig& cfg = {});

// A -> A^T as a permutation of vec indices.
Superoperator gen_transpose(Eigen::Index n, const FieldConfig& cfg = {});

// Pointwise conjugation blocks on the diagonal, except that the first output
// point averages the first two input points. Requires k >= 2.
BigSuperoperator gen_point_mixing(std::size_t k, Eigen::Index n, std::uint64_t seed, const FieldConfig& cfg = {});

// map + eps * G with G a seeded random map of unit Frobenius norm.
Superoperator perturb(const Superoperator& map, double eps, std::uint64_t seed);
BigSuperoperator perturb(const BigSuperoperator& map, double eps, std::uint64_t seed);

// Test-only oracle: samples zero-product pairs and multiplies their images,
// evaluating T entry by entry from the stored matrix instead of going through
// apply_map(). Shares no code with the quadric reduction.
Verdict brute_force_separating_oracle(const Superoperator& t, int trials, std::uint64_t seed, const FieldConfig& cfg);

}  // namespace bisep
