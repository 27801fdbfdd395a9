#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "bisep/core_linalg.hpp"
#include "bisep/superop.hpp"

namespace bisep {

enum class Status { separating, not_separating, biseparating, not_invertible };
enum class Direction { forward, inverse };

const char* to_string(Status status);
const char* to_string(Direction direction);

// Point labels attached to a counterexample lifted to matrix-valued functions:
// A lives at point_a, B at point_b, and the images collide at point_out.
struct PointLabels {
  std::string point_a;
  std::string point_b;
  std::string point_out;
};

// A pair with A * B = 0 whose images do not multiply to zero.
struct Counterexample {
  Matrix a;
  Matrix b;
  double product_in_norm = 0.0;
  double violation_norm = 0.0;
  std::optional<PointLabels> points;
};

struct Verdict {
  Status status = Status::separating;
  std::optional<Counterexample> counterexample;
  std::optional<Direction> direction;

  bool passed() const { return status == Status::separating || status == Status::biseparating; }
};

struct ScalarTest {
  bool is_scalar = true;
  Scalar c;
};

ScalarTest scalar_identity_test(const Matrix& m, const FieldConfig& cfg, double scale);

// Decides the separating property exactly through the rank-one reduction:
// T is separating iff, for all i, l and every output entry (p, q), the n x n
// matrix M_ab = [T(E_ia) T(E_bl)]_pq is a multiple of the identity.
//
// A nonzero off-diagonal M_ab is witnessed by the matrix-unit pair
// (E_ia, E_bl). A diagonal mismatch M_aa != M_bb is witnessed by
// (e_i (x) (e_a* + e_b*), (e_a - e_b) (x) e_l*). Matrix-unit witnesses are
// preferred; within each kind the smallest (i, l, vec(p, q), a, b) wins, with
// output entries scanned in column-major order.
Verdict is_separating_exact(const Superoperator& t, const FieldConfig& cfg);

// Random A, B with A * B = 0 and the requested numeric ranks.
std::pair<Matrix, Matrix> random_zero_product_pair(Eigen::Index n, Eigen::Index rank_a,
                                                   Eigen::Index rank_b, std::uint64_t seed,
                                                   Field field = Field::real);

// Monte-Carlo check over random zero-product pairs cycling through every rank
// split (r_a, r_b) with r_a, r_b >= 1 and r_a + r_b <= n. A separating result
// only means no violation was sampled.
Verdict is_separating_sampled(const Superoperator& t, int trials, std::uint64_t seed,
                              const FieldConfig& cfg);

Verdict is_biseparating(const Superoperator& t, const FieldConfig& cfg);

// max_j ||T(E_j)||_F^2, the scale against which products of images are
// compared with zero.
double product_scale(std::span<const Matrix> images);

namespace detail {

struct QuadricViolation {
  Eigen::Index i = 0, l = 0, p = 0, q = 0, a = 0, b = 0;
  bool off_diagonal = true;
};

// images[vec_index(r, c, n)] = T(E_rc), each m x m. Returns the preferred
// violation per the ordering documented on is_separating_exact.
std::optional<QuadricViolation> find_quadric_violation(std::span<const Matrix> images, Eigen::Index n,
                                                       double threshold);

// The (A, B) witness for a violation, both n x n.
std::pair<Matrix, Matrix> witness_pair(const QuadricViolation& v, Eigen::Index n);

}  // namespace detail

}  // namespace bisep
