#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "bisep/cli.hpp"

namespace bisep::cli {

namespace {

using Clock = std::chrono::steady_clock;

json tolerances(const FieldConfig& cfg) {
  return json{{"tol_rel", cfg.tol_rel}, {"tol_abs", cfg.tol_abs}};
}

json base_report(const std::string& command, const FieldConfig& cfg) {
  return json{{"command", command}, {"tolerances", tolerances(cfg)}};
}

int emit(json& report, Clock::time_point start, std::ostream& out, int code) {
  report["elapsed_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  out << dump(report) << '\n';
  return code;
}

int fail_io(const std::string& command, const FieldConfig& cfg, const std::string& message, Clock::time_point start,
            std::ostream& out, std::ostream& err) {
  err << "error: " << message << '\n';
  json report = base_report(command, cfg);
  report["status"] = "error";
  report["message"] = message;
  return emit(report, start, out, kExitIoOrSchema);
}

json counterexample_to_json(const Counterexample& cx, Field field) {
  json j{{"A", matrix_to_json(cx.a, field)},
         {"B", matrix_to_json(cx.b, field)},
         {"norms", {{"product_in_norm", cx.product_in_norm}, {"violation_norm", cx.violation_norm}}}};
  if (cx.points) {
    j["points"] = {{"A", cx.points->point_a}, {"B", cx.points->point_b}, {"out", cx.points->point_out}};
  }
  return j;
}

void put_verdict(json& report, const Verdict& v, Field field) {
  report["status"] = to_string(v.status);
  if (v.direction) report["direction"] = to_string(*v.direction);
  if (v.counterexample) report["counterexample"] = counterexample_to_json(*v.counterexample, field);
}

int exit_for(Status status) {
  switch (status) {
    case Status::separating:
    case Status::biseparating: return kExitPass;
    case Status::not_invertible: return kExitNotInvertible;
    case Status::not_separating: return kExitPropertyFails;
  }
  return kExitPropertyFails;
}

AnyMap load_map(const std::string& path, const FieldConfig& cfg) {
  return map_from_json(read_json_file(path), cfg);
}

// --- check ------------------------------------------------------------------

struct CheckOptions {
  std::string path;
  double tol = 1e-9;
  int sampled = 0;
  std::uint64_t seed = 0;
};

Verdict sampled_biseparating(const Superoperator& t, int trials, std::uint64_t seed, const FieldConfig& cfg) {
  Verdict v;
  std::optional<SuperopInverse> inv;
  try {
    if (t.n_in() != t.n_out()) throw Singular("dimension change");
    inv = inverse(Superoperator(t.n_in(), t.n_out(), t.mat(), cfg));
  } catch (const Singular&) {
    v.status = Status::not_invertible;
    return v;
  }
  v = is_separating_sampled(t, trials, seed, cfg);
  if (!v.passed()) {
    v.direction = Direction::forward;
    return v;
  }
  v = is_separating_sampled(inv->map, trials, seed, cfg);
  if (!v.passed()) {
    v.direction = Direction::inverse;
    return v;
  }
  v.status = Status::biseparating;
  return v;
}

int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  FieldConfig cfg;
  AnyMap map = Superoperator::zero(1, 1);
  try {
    cfg = FieldConfig(Field::real, opt.tol, cfg.tol_abs);
    map = load_map(opt.path, cfg);
  } catch (const std::exception& e) {
    return fail_io("check", cfg, e.what(), start, out, err);
  }

  json report = base_report("check", cfg);
  if (const auto* t = std::get_if<Superoperator>(&map)) {
    cfg.field = t->cfg().field;
    report["kind"] = "superop";
    Verdict v;
    if (opt.sampled > 0) {
      report["method"] = "sampled";
      report["trials"] = opt.sampled;
      report["seed"] = opt.seed;
      v = sampled_biseparating(*t, opt.sampled, opt.seed, cfg);
    } else {
      report["method"] = "exact";
      v = is_biseparating(*t, cfg);
    }
    put_verdict(report, v, cfg.field);
    return emit(report, start, out, exit_for(v.status));
  }

  const auto& big = std::get<BigSuperoperator>(map);
  cfg.field = big.cfg().field;
  report["kind"] = "big_superop";
  report["method"] = "exact";
  Verdict v = is_biseparating_fn(big, cfg);
  const Verdict strict = is_strictly_separating(big, cfg);
  report["strictly_separating"] = strict.passed();
  if (v.status == Status::biseparating && !strict.passed()) {
    v = strict;
    v.direction = Direction::forward;
    report["property"] = "strictly_separating";
  }
  put_verdict(report, v, cfg.field);
  return emit(report, start, out, exit_for(v.status));
}

// --- decompose --------------------------------------------------------------

struct DecomposeOptions {
  std::string path;
  double tol = 1e-9;
};

int cmd_decompose(const DecomposeOptions& opt, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  FieldConfig cfg;
  AnyMap map = Superoperator::zero(1, 1);
  try {
    cfg = FieldConfig(Field::real, opt.tol, cfg.tol_abs);
    map = load_map(opt.path, cfg);
  } catch (const std::exception& e) {
    return fail_io("decompose", cfg, e.what(), start, out, err);
  }

  json report = base_report("decompose", cfg);
  if (const auto* t = std::get_if<Superoperator>(&map)) {
    cfg.field = t->cfg().field;
    report["kind"] = "superop";
    try {
      const auto form = recover_conjugation(*t, cfg);
      report["status"] = "standard";
      report.update(conjugation_form_to_json(form, cfg.field));
      report["residual"] = verify_form(*t, form, cfg);
      return emit(report, start, out, kExitPass);
    } catch (const RecoveryError& e) {
      report["status"] = "not_standard";
      report["step"] = to_string(e.step());
      report["message"] = e.what();
      if (e.residual()) report["residual"] = *e.residual();
      return emit(report, start, out, kExitPropertyFails);
    }
  }

  const auto& big = std::get<BigSuperoperator>(map);
  cfg.field = big.cfg().field;
  report["kind"] = "big_superop";
  try {
    const auto form = recover_pointwise(big, cfg);
    report["status"] = "standard";
    report.update(pointwise_form_to_json(form, big));
    report["residual"] = verify_pointwise(big, form, cfg);
    return emit(report, start, out, kExitPass);
  } catch (const PointwiseRecoveryError& e) {
    report["status"] = "not_standard";
    report["step"] = e.step_name();
    if (!e.point().empty()) report["point"] = e.point();
    report["message"] = e.what();
    return emit(report, start, out, kExitPropertyFails);
  } catch (const RecoveryError& e) {
    report["status"] = "not_standard";
    report["step"] = to_string(e.step());
    report["message"] = e.what();
    return emit(report, start, out, kExitPropertyFails);
  }
}

// --- gen --------------------------------------------------------------------

struct GenOptions {
  std::string kind;
  int n = 2;
  int k = 3;
  std::uint64_t seed = 0;
  std::string alpha = "0.5,2";
  double cond_cap = kDefaultCondCap;
  std::string negative;
  std::string field = "real";
  std::string out_path;
};

AlphaRange parse_alpha(const std::string& text) {
  AlphaRange range;
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) {
      range.lo = range.hi = std::stod(text);
    } else {
      range.lo = std::stod(text.substr(0, comma));
      range.hi = std::stod(text.substr(comma + 1));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("--alpha must be 'value' or 'lo,hi'");
  }
  if (!(range.lo > 0.0) || range.hi < range.lo) throw std::invalid_argument("--alpha needs 0 < lo <= hi");
  return range;
}

std::string truth_path_for(const std::string& out_path) {
  const std::string suffix = ".json";
  if (out_path.size() > suffix.size() && out_path.ends_with(suffix)) {
    return out_path.substr(0, out_path.size() - suffix.size()) + ".truth.json";
  }
  return out_path + ".truth.json";
}

InstanceBundle build_instance(const GenOptions& opt, const FieldConfig& cfg) {
  if (opt.n < 1) throw std::invalid_argument("--n must be >= 1");
  const AlphaRange alpha = parse_alpha(opt.alpha);
  const bool big = opt.kind == "big_superop";
  if (!big && opt.kind != "superop") throw std::invalid_argument("kind must be superop or big_superop");
  if (big && opt.k < 1) throw std::invalid_argument("--k must be >= 1");
  const auto k = static_cast<std::size_t>(opt.k);

  if (opt.negative.empty()) {
    return big ? gen_pointwise(k, opt.n, opt.seed, alpha, opt.cond_cap, cfg)
               : gen_conjugation(opt.n, opt.seed, alpha, opt.cond_cap, cfg);
  }
  if (opt.negative == "transpose") {
    if (opt.n < 2) throw std::invalid_argument("transpose negative needs --n >= 2");
    if (!big) return {"transpose n=" + std::to_string(opt.n), {}, gen_transpose(opt.n, cfg), opt.seed};
    // transpose inside the first output point's block
    auto bundle = gen_pointwise(k, opt.n, opt.seed, alpha, opt.cond_cap, cfg);
    const auto& base = bundle.big();
    const Matrix mat = base.to_matrix();
    const auto& phi = std::get<PointwiseForm>(bundle.ground_truth).phi;
    const Eigen::Index sq = static_cast<Eigen::Index>(opt.n) * opt.n;
    Matrix mixed = mat;
    mixed.block(0, static_cast<Eigen::Index>(phi[0]) * sq, sq, sq) =
        base.block(0, phi[0]).mat() * gen_transpose(opt.n, cfg).mat();
    return {"pointwise with transposed block", {},
            BigSuperoperator::from_matrix(base.points_in(), base.points_out(), opt.n, opt.n, mixed, cfg), opt.seed};
  }
  if (opt.negative == "mixing") {
    if (!big) throw std::invalid_argument("mixing negative applies to big_superop only");
    return {"point mixing k=" + std::to_string(k), {}, gen_point_mixing(k, opt.n, opt.seed, cfg), opt.seed};
  }
  if (opt.negative.starts_with("perturb:")) {
    double eps = 0.0;
    try {
      eps = std::stod(opt.negative.substr(8));
    } catch (const std::exception&) {
      throw std::invalid_argument("perturb needs a number: perturb:<eps>");
    }
    if (!(eps >= 0.0)) throw std::invalid_argument("perturb eps must be >= 0");
    auto bundle = big ? gen_pointwise(k, opt.n, opt.seed, alpha, opt.cond_cap, cfg)
                      : gen_conjugation(opt.n, opt.seed, alpha, opt.cond_cap, cfg);
    const std::uint64_t pseed = opt.seed + 1;
    AnyMap perturbed = big ? AnyMap(perturb(bundle.big(), eps, pseed)) : AnyMap(perturb(bundle.superop(), eps, pseed));
    GroundTruth truth = eps == 0.0 ? bundle.ground_truth : GroundTruth{};
    return {bundle.description + " perturbed by " + std::to_string(eps), std::move(truth), std::move(perturbed),
            opt.seed};
  }
  throw std::invalid_argument("--negative must be transpose, mixing or perturb:<eps>");
}

int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  FieldConfig cfg;
  try {
    cfg.field = field_from_string(opt.field);
    const InstanceBundle bundle = build_instance(opt, cfg);
    write_text_file_atomic(opt.out_path, dump(map_to_json(bundle.map)) + "\n");
    json files = json::array({opt.out_path});
    if (!std::holds_alternative<std::monostate>(bundle.ground_truth)) {
      const std::string truth_path = truth_path_for(opt.out_path);
      write_text_file_atomic(truth_path, dump(ground_truth_to_json(bundle)) + "\n");
      files.push_back(truth_path);
    }
    json report = base_report("gen", cfg);
    report["status"] = "written";
    report["description"] = bundle.description;
    report["seed"] = opt.seed;
    report["files"] = files;
    return emit(report, start, out, kExitPass);
  } catch (const std::exception& e) {
    return fail_io("gen", cfg, e.what(), start, out, err);
  }
}

// --- roundtrip --------------------------------------------------------------

struct RoundtripOptions {
  int max_n = 6;
  int max_k = 4;
  int seeds = 25;
  double tol = 1e-8;
  std::uint64_t seed_base = 0;
};

struct Tally {
  int cases = 0;
  int failures = 0;
  double worst_residual = 0.0;
  double worst_alpha_error = 0.0;
  double worst_s_error = 0.0;
  json failure_log = json::array();

  void fail(const std::string& what) {
    ++failures;
    if (failure_log.size() < 20) failure_log.push_back(what);
  }
};

double alpha_error(Scalar got, Scalar want) {
  return std::abs(got - want) / std::abs(want);
}

void roundtrip_conjugation(Eigen::Index n, std::uint64_t seed, const RoundtripOptions& opt, const FieldConfig& cfg,
                           Tally& tally) {
  ++tally.cases;
  const std::string tag = "conjugation n=" + std::to_string(n) + " seed=" + std::to_string(seed);
  const auto bundle = gen_conjugation(n, seed, {}, kDefaultCondCap, cfg);
  const auto& truth = std::get<ConjugationForm>(bundle.ground_truth);
  if (is_biseparating(bundle.superop(), cfg).status != Status::biseparating) {
    tally.fail(tag + ": not biseparating");
    return;
  }
  try {
    const auto form = recover_conjugation(bundle.superop(), cfg);
    const double residual = verify_form(bundle.superop(), form, cfg);
    const double ea = alpha_error(form.alpha, truth.alpha);
    const double es = (form.s - truth.s).norm();
    tally.worst_residual = std::max(tally.worst_residual, residual);
    tally.worst_alpha_error = std::max(tally.worst_alpha_error, ea);
    tally.worst_s_error = std::max(tally.worst_s_error, es);
    if (residual > opt.tol || ea > opt.tol || es > opt.tol) tally.fail(tag + ": error above tolerance");
  } catch (const RecoveryError& e) {
    tally.fail(tag + ": " + e.what());
  }
}

void roundtrip_pointwise(std::size_t k, Eigen::Index n, std::uint64_t seed, const RoundtripOptions& opt,
                         const FieldConfig& cfg, Tally& tally) {
  ++tally.cases;
  const std::string tag =
      "pointwise k=" + std::to_string(k) + " n=" + std::to_string(n) + " seed=" + std::to_string(seed);
  const auto bundle = gen_pointwise(k, n, seed, {}, kDefaultCondCap, cfg);
  const auto& truth = std::get<PointwiseForm>(bundle.ground_truth);
  if (is_biseparating_fn(bundle.big(), cfg).status != Status::biseparating ||
      !is_strictly_separating(bundle.big(), cfg).passed()) {
    tally.fail(tag + ": check rejected a positive instance");
    return;
  }
  try {
    const auto form = recover_pointwise(bundle.big(), cfg);
    const double residual = verify_pointwise(bundle.big(), form, cfg);
    tally.worst_residual = std::max(tally.worst_residual, residual);
    bool ok = form.phi == truth.phi && residual <= opt.tol;
    for (std::size_t x = 0; x < k && ok; ++x) {
      const double ea = alpha_error(form.alpha[x], truth.alpha[x]);
      const double es = (form.s[x] - truth.s[x]).norm();
      tally.worst_alpha_error = std::max(tally.worst_alpha_error, ea);
      tally.worst_s_error = std::max(tally.worst_s_error, es);
      ok = ea <= opt.tol && es <= opt.tol;
    }
    if (!ok) tally.fail(tag + ": recovered form differs from ground truth");
  } catch (const std::exception& e) {
    tally.fail(tag + ": " + e.what());
  }
}

int cmd_roundtrip(const RoundtripOptions& opt, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const FieldConfig cfg;
  if (opt.max_n < 1 || opt.max_k < 1 || opt.seeds < 0 || !(opt.tol > 0.0)) {
    return fail_io("roundtrip", cfg, "bounds must be >= 1, seeds >= 0 and tol > 0", start, out, err);
  }

  Tally tally;
  for (int s = 0; s < opt.seeds; ++s) {
    const std::uint64_t seed = opt.seed_base + static_cast<std::uint64_t>(s);
    for (int n = 1; n <= opt.max_n; ++n) roundtrip_conjugation(n, seed, opt, cfg, tally);
    for (int k = 1; k <= opt.max_k; ++k) {
      for (int n = 1; n <= std::min(opt.max_n, 3); ++n) {
        roundtrip_pointwise(static_cast<std::size_t>(k), n, seed, opt, cfg, tally);
      }
    }
  }
  // curated negatives must be rejected
  if (opt.seeds > 0) {
    for (int n = 2; n <= opt.max_n; ++n) {
      ++tally.cases;
      const auto v = is_biseparating(gen_transpose(n, cfg), cfg);
      if (v.status != Status::not_separating) tally.fail("transpose n=" + std::to_string(n) + " accepted");
    }
    for (int k = 2; k <= opt.max_k; ++k) {
      ++tally.cases;
      const auto mixing = gen_point_mixing(static_cast<std::size_t>(k), 2, opt.seed_base, cfg);
      if (is_strictly_separating(mixing, cfg).passed()) tally.fail("point mixing k=" + std::to_string(k) + " accepted");
    }
  }

  json report = base_report("roundtrip", cfg);
  report["status"] = tally.failures == 0 ? "pass" : "fail";
  report["acceptance_tol"] = opt.tol;
  report["bounds"] = {{"max_n", opt.max_n}, {"max_k", opt.max_k}, {"seeds", opt.seeds}};
  report["seed"] = opt.seed_base;
  report["cases"] = tally.cases;
  report["failures"] = tally.failures;
  report["empty"] = tally.cases == 0;
  report["worst_residual"] = tally.worst_residual;
  report["worst_alpha_error"] = tally.worst_alpha_error;
  report["worst_s_error"] = tally.worst_s_error;
  if (!tally.failure_log.empty()) report["failure_log"] = tally.failure_log;
  if (tally.cases == 0) err << "warning: roundtrip ran zero cases\n";
  return emit(report, start, out, tally.failures == 0 ? kExitPass : kExitPropertyFails);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separating and biseparating maps between matrix algebras"};
  app.name("bisep");
  app.require_subcommand(1);

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Decide whether an instance is biseparating");
  check_cmd->add_option("path", check.path, "Instance file")->required();
  check_cmd->add_option("--tol", check.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  check_cmd->add_option("--sampled", check.sampled, "Use the Monte-Carlo checker with this many trials")
      ->check(CLI::NonNegativeNumber);
  check_cmd->add_option("--seed", check.seed, "Seed for the sampled checker");

  DecomposeOptions decompose;
  auto* decompose_cmd = app.add_subcommand("decompose", "Recover the conjugation or pointwise form");
  decompose_cmd->add_option("path", decompose.path, "Instance file")->required();
  decompose_cmd->add_option("--tol", decompose.tol, "Relative tolerance")->check(CLI::PositiveNumber);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file (and its ground truth)");
  gen_cmd->add_option("kind", gen.kind, "superop or big_superop")->required();
  gen_cmd->add_option("--n", gen.n, "Matrix size");
  gen_cmd->add_option("--k", gen.k, "Number of points (big_superop)");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--alpha", gen.alpha, "|alpha| value or range lo,hi");
  gen_cmd->add_option("--cond-cap", gen.cond_cap, "Condition-number cap for S");
  gen_cmd->add_option("--negative", gen.negative, "transpose | mixing | perturb:<eps>");
  gen_cmd->add_option("--field", gen.field, "real or complex");
  gen_cmd->add_option("--out,-o", gen.out_path, "Output instance path")->required();

  RoundtripOptions roundtrip;
  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "Generate, check, decompose and verify a grid of instances");
  roundtrip_cmd->add_option("--max-n", roundtrip.max_n, "Largest matrix size");
  roundtrip_cmd->add_option("--max-k", roundtrip.max_k, "Largest point count");
  roundtrip_cmd->add_option("--seeds", roundtrip.seeds, "Seeds per configuration");
  roundtrip_cmd->add_option("--tol", roundtrip.tol, "Acceptance threshold for residuals and errors");
  roundtrip_cmd->add_option("--seed", roundtrip.seed_base, "First seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitIoOrSchema;
  }

  try {
    if (check_cmd->parsed()) return cmd_check(check, out, err);
    if (decompose_cmd->parsed()) return cmd_decompose(decompose, out, err);
    if (gen_cmd->parsed()) return cmd_gen(gen, out, err);
    return cmd_roundtrip(roundtrip, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoOrSchema;
  }
}

}  // namespace bisep::cli
