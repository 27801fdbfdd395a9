// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// all nine pass. Tolerances and sizes are fixed; nothing here is tuned to the
// implementation.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bisep/cli.hpp"
#include "bisep/harness.hpp"
#include "test_support.hpp"

using namespace bisep;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void fail(const std::string& why) {
    pass = false;
    if (problems.size() < 5) problems.push_back(why);
  }
};

double alpha_rel(Scalar got, Scalar want) { return std::abs(got - want) / std::abs(want); }

// Image product check shared by the counterexample criteria: A B = 0 to
// rounding and T(A) T(B) visibly nonzero against the map's own scale.
bool counterexample_verifies(const Superoperator& t, const Counterexample& cx, double violation_factor) {
  const double ab = (cx.a * cx.b).norm();
  if (ab > 1e-13 * cx.a.norm() * cx.b.norm()) return false;
  double scale = 0.0;
  for (Eigen::Index j = 0; j < t.mat().cols(); ++j) scale = std::max(scale, t.mat().col(j).squaredNorm());
  const double v = (apply_map(t, cx.a) * apply_map(t, cx.b)).norm();
  return v > violation_factor * scale;
}

// --- 1 ----------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const FieldConfig cfg;
  const auto t0 = Clock::now();
  double worst_a = 0.0, worst_s = 0.0, worst_r = 0.0;
  int count = 0;
  for (Eigen::Index n = 1; n <= 8; ++n) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto b = gen_conjugation(n, seed);
      const auto& truth = std::get<ConjugationForm>(b.ground_truth);
      try {
        const auto form = recover_conjugation(b.superop(), cfg);
        const double ea = alpha_rel(form.alpha, truth.alpha);
        const double es = (form.s - truth.s).norm();
        const double r = verify_form(b.superop(), form, cfg);
        worst_a = std::max(worst_a, ea);
        worst_s = std::max(worst_s, es);
        worst_r = std::max(worst_r, r);
        if (ea > 1e-8 || es > 1e-8 || r > 1e-8)
          o.fail("n=" + std::to_string(n) + " seed=" + std::to_string(seed) + " outside 1e-8");
      } catch (const std::exception& e) {
        o.fail("n=" + std::to_string(n) + " seed=" + std::to_string(seed) + ": " + e.what());
      }
      ++count;
    }
  }
  const double secs = seconds_since(t0);
  if (secs > 30.0) o.fail("runtime " + std::to_string(secs) + " s > 30 s");
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d instances, worst alpha rel %.2e, S %.2e, residual %.2e, %.2f s", count, worst_a,
                worst_s, worst_r, secs);
  o.detail = buf;
  return o;
}

// --- 2 ----------------------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  const FieldConfig cfg;
  const auto t0 = Clock::now();
  int passed = 0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index n = 1 + i % 6;
    const auto b = gen_conjugation(n, 1000 + static_cast<std::uint64_t>(i));
    if (is_separating_exact(b.superop(), cfg).status == Status::separating)
      ++passed;
    else
      o.fail("conjugation #" + std::to_string(i) + " rejected");
  }
  int transposes = 0;
  for (Eigen::Index n = 2; n <= 6; ++n) {
    const auto t = gen_transpose(n, cfg);
    const auto v = is_separating_exact(t, cfg);
    if (v.status != Status::not_separating || !v.counterexample) {
      o.fail("transpose n=" + std::to_string(n) + " accepted");
    } else if (!counterexample_verifies(t, *v.counterexample, 1e-6)) {
      o.fail("transpose n=" + std::to_string(n) + " counterexample does not verify");
    } else {
      ++transposes;
    }
  }
  const double secs = seconds_since(t0);
  if (secs > 20.0) o.fail("runtime " + std::to_string(secs) + " s > 20 s");
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d/200 conjugations separating, %d/5 transposes refuted with verified witness, %.2f s",
                passed, transposes, secs);
  o.detail = buf;
  return o;
}

// --- 3 ----------------------------------------------------------------------

// Separating maps that are neither injective nor conjugations: A -> g(A) X
// with X = P E_1n P^{-1}, so X^2 = 0, and g a random linear functional.
Superoperator nilpotent_range_map(Eigen::Index n, testsupport::TestRng& rng, const FieldConfig& cfg) {
  const Matrix p = rng.real_matrix(n, n);
  const Matrix x = p * testsupport::unit(n, 0, n - 1) * p.inverse();
  const Matrix g = rng.real_matrix(1, n * n);
  return Superoperator(n, n, vectorize(x) * g, cfg);
}

Outcome criterion3() {
  Outcome o;
  const FieldConfig cfg;
  const auto t0 = Clock::now();
  testsupport::TestRng rng(2024);
  int disagreements = 0, negatives = 0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index n = 2 + i % 2;
    const auto seed = static_cast<std::uint64_t>(5000 + i);
    Superoperator t = Superoperator::identity(n, cfg);
    std::string label;
    switch (i % 8) {
      case 0: t = gen_conjugation(n, seed).superop(); label = "conjugation"; break;
      case 1: t = perturb(gen_conjugation(n, seed).superop(), 1e-3, seed); label = "perturbed 1e-3"; break;
      case 2: t = perturb(gen_conjugation(n, seed).superop(), 1e-6, seed); label = "perturbed 1e-6"; break;
      case 3: t = gen_transpose(n, cfg); label = "transpose"; break;
      case 4:
        t = compose(gen_transpose(n, cfg), gen_conjugation(n, seed).superop());
        label = "transpose after conjugation";
        break;
      case 5: t = nilpotent_range_map(n, rng, cfg); label = "nilpotent range"; break;
      case 6: t = Superoperator(n, n, rng.real_matrix(n * n, n * n), cfg); label = "random"; break;
      default: t = Superoperator::zero(n, n, cfg); label = "zero"; break;
    }
    const auto exact = is_separating_exact(t, cfg);
    const auto oracle = brute_force_separating_oracle(t, 10000, seed, cfg);
    if (exact.status != oracle.status) {
      ++disagreements;
      o.fail("#" + std::to_string(i) + " (" + label + ", n=" + std::to_string(n) + "): exact " +
             to_string(exact.status) + ", oracle " + to_string(oracle.status));
    }
    if (exact.status == Status::not_separating) ++negatives;
  }
  const double secs = seconds_since(t0);
  if (secs > 60.0) o.fail("runtime " + std::to_string(secs) + " s > 60 s");
  char buf[256];
  std::snprintf(buf, sizeof buf, "200 maps (%d not separating), %d disagreements at 1e4 oracle trials, %.2f s",
                negatives, disagreements, secs);
  o.detail = buf;
  return o;
}

// --- 4 ----------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const FieldConfig cfg;
  const auto t0 = Clock::now();
  const double eps_levels[] = {1e-2, 1e-3, 1e-6, 1e-9, 1e-12, 1e-14};
  int passing = 0, recovered = 0;
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Eigen::Index n = 1 + i % 4;
    const auto seed = static_cast<std::uint64_t>(9000 + i);
    Superoperator t = Superoperator::identity(n, cfg);
    switch (i % 5) {
      case 0: t = gen_conjugation(n, seed).superop(); break;
      case 1:
      case 2: t = perturb(gen_conjugation(n, seed).superop(), eps_levels[(i / 5) % 6], seed); break;
      case 3:
        t = n >= 2 ? compose(gen_transpose(n, cfg), gen_conjugation(n, seed).superop())
                   : perturb(gen_conjugation(n, seed).superop(), 0.3, seed);
        break;
      default:
        // curated: conjugation with one basis image dropped, or a point-scaled image
        t = gen_conjugation(n, seed).superop();
        {
          Matrix m = t.mat();
          if (i % 2 == 0)
            m.col(0).setZero();
          else
            m.col(m.cols() - 1) *= 2.0;
          t = Superoperator(n, n, m, cfg);
        }
        break;
    }
    if (!is_biseparating(t, cfg).passed()) continue;
    ++passing;
    try {
      const auto form = recover_conjugation(t, cfg);
      const double r = verify_form(t, form, cfg);
      worst = std::max(worst, r);
      if (r <= 1e-8)
        ++recovered;
      else
        o.fail("#" + std::to_string(i) + " residual " + std::to_string(r));
    } catch (const std::exception& e) {
      o.fail("#" + std::to_string(i) + " n=" + std::to_string(n) + " rejected: " + e.what());
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d of 500 candidates biseparating, %d recovered, worst residual %.2e, %.2f s", passing,
                recovered, worst, seconds_since(t0));
  o.detail = buf;
  return o;
}

// --- 5 ----------------------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  const FieldConfig cfg;
  const auto t0 = Clock::now();
  int count = 0;
  double worst_a = 0.0, worst_s = 0.0;
  for (std::size_t k = 1; k <= 5; ++k) {
    for (Eigen::Index n = 1; n <= 3; ++n) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ++count;
        const std::string tag = "k=" + std::to_string(k) + " n=" + std::to_string(n) + " seed=" + std::to_string(seed);
        const auto b = gen_pointwise(k, n, seed);
        const auto& truth = std::get<PointwiseForm>(b.ground_truth);
        try {
          const auto form = recover_pointwise(b.big(), cfg);
          if (form.phi != truth.phi) o.fail(tag + ": phi differs");
          for (std::size_t x = 0; x < k; ++x) {
            const double ea = alpha_rel(form.alpha[x], truth.alpha[x]);
            const double es = (form.s[x] - truth.s[x]).norm();
            worst_a = std::max(worst_a, ea);
            worst_s = std::max(worst_s, es);
            if (ea > 1e-8 || es > 1e-8) o.fail(tag + ": point outside 1e-8");
            if (n == 1) {
              if (form.s[x] != Matrix::Identity(1, 1)) o.fail(tag + ": S_x is not [1]");
              if (std::abs(form.alpha[x]) <= cfg.tol_abs) o.fail(tag + ": tau vanishes");
            }
          }
        } catch (const std::exception& e) {
          o.fail(tag + ": " + e.what());
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs > 60.0) o.fail("runtime " + std::to_string(secs) + " s > 60 s");
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d instances, phi exact, worst alpha rel %.2e, S %.2e, %.2f s", count, worst_a,
                worst_s, secs);
  o.detail = buf;
  return o;
}

// --- 6 ----------------------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  const FieldConfig cfg;
  const auto t0 = Clock::now();
  int implications = 0, mixing = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 2 + static_cast<std::size_t>(i % 4);
    const Eigen::Index n = 1 + (i / 4) % 3;
    const auto seed = static_cast<std::uint64_t>(300 + i);
    const std::string tag = "#" + std::to_string(i);
    try {
      if (i % 2 == 0) {
        // positives and tiny perturbations of them
        BigSuperoperator t = gen_pointwise(k, n, seed).big();
        if (i % 4 == 2) t = perturb(t, 1e-13, seed);
        const bool fwd = is_separating_fn(t, cfg).passed();
        const auto inv = inverse(t);
        const bool bwd = is_separating_fn(inv.map, cfg).passed();
        if (fwd && bwd) {
          ++implications;
          if (!is_strictly_separating(t, cfg).passed()) o.fail(tag + ": biseparating but not strictly separating");
        }
      } else {
        const auto t = gen_point_mixing(k, std::max<Eigen::Index>(n, 1), seed, cfg);
        const auto v = is_strictly_separating(t, cfg);
        if (v.passed() || !v.counterexample || !v.counterexample->points) {
          o.fail(tag + ": point mixing passed or gave no witness");
          continue;
        }
        const auto& pts = *v.counterexample->points;
        const auto fa = MatrixFunction::delta(t.points_in(), t.points_in().index_of(pts.point_a), v.counterexample->a);
        const auto fb = MatrixFunction::delta(t.points_in(), t.points_in().index_of(pts.point_b), v.counterexample->b);
        const auto sa = support(apply_fn(t, fa), cfg);
        const auto sb = support(apply_fn(t, fb), cfg);
        const bool disjoint_in = pts.point_a != pts.point_b;
        if (!disjoint_in || !sa.count(pts.point_out) || !sb.count(pts.point_out)) {
          o.fail(tag + ": witness pair does not verify");
        } else {
          ++mixing;
        }
      }
    } catch (const std::exception& e) {
      o.fail(tag + ": exception " + e.what());
    }
  }
  if (implications != 50) o.fail("only " + std::to_string(implications) + "/50 positives were biseparating");
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d biseparating instances strictly separating, %d/50 mixing maps refuted, %.2f s",
                implications, mixing, seconds_since(t0));
  o.detail = buf;
  return o;
}

// --- 7 ----------------------------------------------------------------------

// L(H) within R(H), by sampling G from L(H): at each point G(x) = C K^T with
// the columns of K spanning the left null space of H(x).
bool ai_by_definition(const std::vector<Matrix>& h, testsupport::TestRng& rng, int trials) {
  const Eigen::Index n = h.front().rows();
  std::vector<Matrix> left_kernels;
  for (const auto& hx : h) {
    Eigen::FullPivLU<Matrix> lu(hx.transpose());
    lu.setThreshold(1e-10);
    left_kernels.push_back(lu.dimensionOfKernel() == 0 ? Matrix(n, 0) : Matrix(lu.kernel()));
  }
  double hnorm = 0.0;
  for (const auto& hx : h) hnorm = std::max(hnorm, hx.norm());
  for (int t = 0; t < trials; ++t) {
    double gh = 0.0, hg = 0.0, gnorm = 0.0;
    for (std::size_t x = 0; x < h.size(); ++x) {
      const Matrix& k = left_kernels[x];
      // some trials leave a point at zero so sparse G are exercised too
      const bool active = (t + static_cast<int>(x)) % 3 != 0 || t % 2 == 0;
      const Matrix g = (k.cols() == 0 || !active) ? Matrix(Matrix::Zero(n, n))
                                                  : Matrix(rng.real_matrix(n, k.cols()) * k.transpose());
      gh = std::max(gh, (g * h[x]).norm());
      hg = std::max(hg, (h[x] * g).norm());
      gnorm = std::max(gnorm, g.norm());
    }
    if (gh > 1e-12 * std::max(1.0, gnorm * hnorm)) continue;  // outside L(H) after rounding; skip
    if (hg > 1e-9 * std::max(1.0, gnorm * hnorm)) return false;
  }
  return true;
}

Outcome criterion7() {
  Outcome o;
  const FieldConfig cfg;
  const auto t0 = Clock::now();
  testsupport::TestRng rng(77);
  const auto space = DiscreteSpace::numbered(2);
  int members = 0, non_members = 0, disagreements = 0, draws = 0;
  while ((members < 50 || non_members < 50) && draws < 1000) {
    ++draws;
    std::vector<Matrix> h;
    for (int x = 0; x < 2; ++x) {
      switch (rng.real_vector(1)(0).real() > 0 ? (draws + x) % 3 : (draws * 7 + x) % 3) {
        case 0: h.push_back(Matrix::Zero(2, 2)); break;
        case 1: h.push_back(rng.real_matrix(2, 2)); break;
        default: h.push_back(rng.real_matrix(2, 1) * rng.real_matrix(1, 2)); break;
      }
    }
    const bool truth = ai_by_definition(h, rng, 10000);
    const bool got = ai_membership(MatrixFunction(space, 2, h), cfg);
    if (truth != got) {
      ++disagreements;
      o.fail("H #" + std::to_string(draws) + ": definition " + (truth ? "member" : "non-member") + ", checker differs");
    }
    (truth ? members : non_members)++;
  }
  if (members < 50 || non_members < 50) o.fail("class counts below 50");
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d members, %d non-members, 1e4 G per H, %d disagreements, %.2f s", members,
                non_members, disagreements, seconds_since(t0));
  o.detail = buf;
  return o;
}

// --- 8 ----------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  const FieldConfig cfg;
  const auto t0 = Clock::now();
  int flagged = 0, clean_flagged = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 3);
    const auto base = gen_conjugation(n, seed).superop();
    if (is_separating_exact(perturb(base, 1e-3, seed + 7), cfg).status == Status::not_separating) ++flagged;
    if (is_separating_exact(perturb(base, 0.0, seed + 7), cfg).status == Status::not_separating) ++clean_flagged;
  }
  if (flagged < 95) o.fail("only " + std::to_string(flagged) + "/100 perturbations flagged");
  if (clean_flagged != 0) o.fail(std::to_string(clean_flagged) + " unperturbed maps flagged");
  char buf[256];
  std::snprintf(buf, sizeof buf, "eps=1e-3 flagged %d/100, eps=0 flagged %d/100, %.2f s", flagged, clean_flagged,
                seconds_since(t0));
  o.detail = buf;
  return o;
}

// --- 9 ----------------------------------------------------------------------

struct CliResult {
  int code;
  cli::json report;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str().empty() ? cli::json() : cli::json::parse(out.str())};
}

Outcome criterion9() {
  Outcome o;
  const auto t0 = Clock::now();
  const fs::path dir = fs::temp_directory_path() / ("bisep_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto file = [&](const std::string& name) { return (dir / name).string(); };

  // schema-invalid files
  const std::string good =
      R"({"kind":"superop","field":"real","n_in":1,"n_out":1,"vec_convention":"column-major","matrix":[[2.0]]})";
  const std::vector<std::pair<std::string, std::string>> bad = {
      {"vec_convention", R"({"kind":"superop","field":"real","n_in":1,"n_out":1,"vec_convention":"row-major","matrix":[[2.0]]})"},
      {"matrix", R"({"kind":"superop","field":"real","n_in":1,"n_out":1,"vec_convention":"column-major","matrix":[[2.0,1.0]]})"},
      {"kind", R"({"field":"real","n_in":1,"n_out":1,"vec_convention":"column-major","matrix":[[2.0]]})"},
      {"n_out", R"({"kind":"superop","field":"real","n_in":1,"n_out":"one","vec_convention":"column-major","matrix":[[2.0]]})"},
      {"points_in", R"({"kind":"big_superop","field":"real","n_in":1,"n_out":1,"vec_convention":"column-major","points_out":["y"],"blocks":{}})"},
  };
  int schema_ok = 0;
  for (const auto& [field, text] : bad) {
    std::ofstream(file("bad.json")) << text;
    const auto r = run_cli({"check", file("bad.json")});
    const std::string msg = r.report.value("message", "");
    if (r.code == 1 && msg.find(field) != std::string::npos)
      ++schema_ok;
    else
      o.fail("schema error for '" + field + "' gave exit " + std::to_string(r.code) + " message '" + msg + "'");
  }
  std::ofstream(file("good.json")) << good;
  if (run_cli({"check", file("good.json")}).code != 0) o.fail("valid 1x1 file rejected");

  // criterion 1 through files
  int superops = 0;
  for (int n = 1; n <= 8; ++n) {
    for (int seed = 0; seed < 3; ++seed) {
      const std::string path = file("c.json");
      const std::string tag = "superop n=" + std::to_string(n) + " seed=" + std::to_string(seed);
      if (run_cli({"gen", "superop", "--n", std::to_string(n), "--seed", std::to_string(seed), "--out", path}).code) {
        o.fail(tag + ": gen failed");
        continue;
      }
      if (run_cli({"check", path}).code != 0) o.fail(tag + ": check failed");
      const auto d = run_cli({"decompose", path});
      const auto truth = cli::read_json_file(file("c.truth.json"));
      if (d.code != 0) {
        o.fail(tag + ": decompose failed");
        continue;
      }
      const Scalar a = cli::scalar_from_json(d.report["alpha"], Field::real, "alpha");
      const Scalar at = cli::scalar_from_json(truth["alpha"], Field::real, "alpha");
      const Matrix s = cli::matrix_from_json(d.report["S"], Field::real, n, n, "S");
      const Matrix st = cli::matrix_from_json(truth["S"], Field::real, n, n, "S");
      if (alpha_rel(a, at) > 1e-8 || (s - st).norm() > 1e-8 || d.report["residual"].get<double>() > 1e-8)
        o.fail(tag + ": decomposition differs from truth");
      else
        ++superops;
    }
  }

  // criterion 5 through files
  int bigs = 0;
  for (int k = 1; k <= 5; ++k) {
    for (int n = 1; n <= 3; ++n) {
      for (int seed = 0; seed < 2; ++seed) {
        const std::string path = file("p.json");
        const std::string tag = "big k=" + std::to_string(k) + " n=" + std::to_string(n) + " seed=" + std::to_string(seed);
        if (run_cli({"gen", "big_superop", "--k", std::to_string(k), "--n", std::to_string(n), "--seed",
                     std::to_string(seed), "--out", path})
                .code) {
          o.fail(tag + ": gen failed");
          continue;
        }
        if (run_cli({"check", path}).code != 0) o.fail(tag + ": check failed");
        const auto d = run_cli({"decompose", path});
        const auto truth = cli::read_json_file(file("p.truth.json"));
        if (d.code != 0) {
          o.fail(tag + ": decompose failed");
          continue;
        }
        bool ok = d.report["phi"] == truth["phi"];
        for (const auto& [label, alpha_json] : truth["alpha"].items()) {
          const Scalar a = cli::scalar_from_json(d.report["alpha"][label], Field::real, "alpha");
          const Scalar at = cli::scalar_from_json(alpha_json, Field::real, "alpha");
          const Matrix s = cli::matrix_from_json(d.report["S"][label], Field::real, n, n, "S");
          const Matrix st = cli::matrix_from_json(truth["S"][label], Field::real, n, n, "S");
          ok = ok && alpha_rel(a, at) <= 1e-8 && (s - st).norm() <= 1e-8;
          if (n == 1) ok = ok && s == Matrix::Identity(1, 1);
        }
        if (ok)
          ++bigs;
        else
          o.fail(tag + ": decomposition differs from truth");
      }
    }
  }
  fs::remove_all(dir);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d/%zu schema errors named, %d/24 superop and %d/30 big pipelines match truth, %.2f s",
                schema_ok, bad.size(), superops, bigs, seconds_since(t0));
  o.detail = buf;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"conjugation round trip", criterion1},
      {"separating checker soundness", criterion2},
      {"exact checker vs brute-force oracle", criterion3},
      {"biseparating maps are standard", criterion4},
      {"pointwise round trip", criterion5},
      {"biseparating implies strictly separating", criterion6},
      {"AI characterization", criterion7},
      {"perturbation detection", criterion8},
      {"CLI contract", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("uncaught exception: ") + e.what());
    }
    std::printf("criterion %zu: %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    for (const auto& p : o.problems) std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
