#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "bisep/core_linalg.hpp"
#include "bisep/superop.hpp"

namespace bisep {

// Certificate T(A) = alpha * S * A * S^{-1}. S is kept in gauge:
// ||S||_F = sqrt(n) and its first column-major entry with modulus above
// tol_abs is real positive. alpha is unaffected by the gauge.
struct ConjugationForm {
  Scalar alpha;
  Matrix s;
};

// Covector-side companion of S: T(u (x) f) = (S u) (x) (Psi f).
struct PsiMap {
  Matrix mat;
};

enum class RecoveryStep {
  dimension_mismatch,
  not_rank_one_preserving,
  not_factorizable,
  not_invertible_s,
  not_standard_form,
  degenerate_map,
};

const char* to_string(RecoveryStep step);

class RecoveryError : public std::runtime_error {
 public:
  RecoveryError(RecoveryStep step, const std::string& detail, std::optional<double> residual = {});

  RecoveryStep step() const { return step_; }
  std::optional<double> residual() const { return residual_; }

 private:
  RecoveryStep step_;
  std::optional<double> residual_;
};

// Puts S into the ConjugationForm gauge.
Matrix gauge_normalize(const Matrix& s, const FieldConfig& cfg);

// T(X) has rank one for every matrix unit X and for 20 seeded random rank-one
// inputs. Singular values are judged against the largest basis image (scaled
// by the input's l1 norms for the random probes), not against T(X) alone, so
// a small image is not rejected for noise a large one would absorb.
bool check_rank_one_preserving(const Superoperator& t, const FieldConfig& cfg);

// Recovers (alpha, S) from the images of E_11 and E_i1: all of T(E_i1) share
// one covector f, and their column factors are the columns of S. alpha is
// read off T(I). Intermediate gates use the largest basis image as their
// scale; the full-basis residual, allowed to grow with cond(S), decides
// whether the form holds.
// Throws RecoveryError naming the step that rejected the map.
ConjugationForm recover_conjugation(const Superoperator& t, const FieldConfig& cfg);

// max_ij ||T(E_ij) - alpha S E_ij S^{-1}||_F / max_ij ||T(E_ij)||_F.
// Throws RecoveryError(degenerate_map) when every image is zero.
double verify_form(const Superoperator& t, const ConjugationForm& form, const FieldConfig& cfg);

// Psi = alpha * S^{-T}, so that S^T Psi = alpha * I.
PsiMap psi_of(const ConjugationForm& form, const FieldConfig& cfg = {});

}  // namespace bisep
