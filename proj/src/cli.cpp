#include "reallog/cli.hpp"

#include <cmath>
#include <string>

#include <CLI11.hpp>

#include "reallog/constructions.hpp"
#include "reallog/error.hpp"
#include "reallog/json_io.hpp"
#include "reallog/matrix_functions.hpp"
#include "reallog/membership.hpp"
#include "reallog/preserver_analysis.hpp"
#include "reallog/random.hpp"

namespace reallog::cli {

namespace {

constexpr int kFalsifyDefaultBudget = 10000;
constexpr double kVerifyConditionCap = 1e2;
constexpr double kVerifyScaleRel = 1e-9;
constexpr double kVerifyConjugatorDist = 1e-8;

MatrixSet parse_set(const std::string& name) {
  if (name == "K") return MatrixSet::K;
  if (name == "Kstar") return MatrixSet::KStar;
  if (name == "closure") return MatrixSet::Closure;
  throw Error(ErrorCode::InvalidArgument, "unknown set " + name);
}

Json spectrum_json(const Matrix& a) {
  Json arr = Json::array();
  for (const Complex& z : eigenvalues(a).values) arr.push_back(Json{{"re", z.real()}, {"im", z.imag()}});
  return arr;
}

Json verdict_json(const MembershipVerdict& v) {
  Json j;
  j["in_set"] = v.in_set;
  if (!v.in_set) j["witness"] = v.witness;
  return j;
}

Json witness_json(const Witness& w) {
  Json j;
  j["set"] = std::string(to_string(w.set));
  j["A"] = matrix_to_json(w.a);
  j["image"] = matrix_to_json(w.image);
  j["explanation"] = w.explanation;
  return j;
}

Json analysis_json(const AnalysisResult& r) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  if (r.form) {
    j["form"] = Json{{"c", r.form->c}, {"P", matrix_to_json(r.form->p)}, {"transposed", r.form->transposed}};
  }
  if (r.witness) j["witness"] = witness_json(*r.witness);
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

void emit(std::ostream& out, const Json& j) { out << dump_json(j) << '\n'; }

int cmd_check(const std::string& in, const std::string& set, std::ostream& out) {
  const Matrix a = matrix_from_json(read_json_file(in));
  const MembershipVerdict v = membership(parse_set(set), a);
  Json j{{"set", set}};
  j.update(verdict_json(v));
  emit(out, j);
  return v.in_set ? kOk : kVerdictFalse;
}

int cmd_logm(const std::string& in, const std::string& dest, const std::string& mode, std::ostream& out) {
  const Matrix a = matrix_from_json(read_json_file(in));
  const LogResult r = mode == "paired" ? real_log_paired(a) : logm_principal(a);
  Json j{{"kind", std::string(to_string(r.kind))}, {"roundtrip_residual", r.roundtrip_residual}};
  if (dest.empty())
    j["log"] = matrix_to_json(r.log_matrix);
  else
    write_json_file(dest, matrix_to_json(r.log_matrix));
  emit(out, j);
  return kOk;
}

int cmd_expm(const std::string& in, const std::string& dest, std::ostream& out) {
  const Matrix x = matrix_from_json(read_json_file(in));
  const Matrix a = expm(x);
  if (dest.empty())
    emit(out, Json{{"exp", matrix_to_json(a)}});
  else {
    write_json_file(dest, matrix_to_json(a));
    emit(out, Json{{"written", dest}});
  }
  return kOk;
}

int cmd_analyze(const std::string& in, std::uint64_t seed, std::ostream& out) {
  const MatrixSpaceMap phi = map_from_json(read_json_file(in));
  emit(out, analysis_json(analyze(phi, {}, SearchOptions{kFalsifyDefaultBudget, seed})));
  return kOk;
}

int cmd_falsify(const std::string& in, const std::string& set, int budget, std::uint64_t seed, std::ostream& out) {
  const MatrixSpaceMap phi = map_from_json(read_json_file(in));
  if (!is_bijective(phi)) throw Error(ErrorCode::InvalidArgument, "witness search needs a bijective map");
  const auto w = falsify_preservation(phi, parse_set(set), budget, {}, seed);
  Json j{{"set", set}, {"budget", budget}, {"seed", seed}, {"found", w.has_value()}};
  if (w) j["witness"] = witness_json(*w);
  emit(out, j);
  return kOk;
}

int cmd_gadgets(double theta, std::ostream& out) {
  const Matrix a = shear_A_theta(theta);
  const Matrix b = product_B_theta(theta);
  Matrix m = identity(4);
  m.topLeftCorner(2, 2) = rotation(theta);
  const Matrix embedded = embedded_witness(theta, 4, m);
  Json j;
  j["theta"] = theta;
  j["A_theta"] = matrix_to_json(a);
  j["B_theta"] = matrix_to_json(b);
  j["trace_B"] = b.trace();
  j["det_B"] = b.determinant();
  j["eigenvalues_B"] = spectrum_json(b);
  j["A_theta_in_Kstar"] = verdict_json(in_K_star(a));
  j["B_theta_in_Kstar"] = verdict_json(in_K_star(b));
  j["embedded_in_Kstar"] = verdict_json(in_K_star(embedded));
  j["embedded_times_rotation_in_Kstar"] = verdict_json(in_K_star(embedded * m));
  emit(out, j);
  return kOk;
}

int cmd_density(int n, int degree, int samples, std::uint64_t seed, std::ostream& out) {
  const bool witness = zariski_density_witness(n, degree, samples, seed);
  emit(out, Json{{"n", n}, {"degree", degree}, {"samples", samples}, {"seed", seed}, {"witness", witness}});
  return kOk;
}

// Forward: random standard maps must be recovered and must preserve K, K*.
// Contrapositive: random two-sided maps with non-scalar QP must yield a witness.
int cmd_verify(int n, int trials, std::uint64_t seed, std::ostream& out) {
  if (n < 1 || trials < 0) throw Error(ErrorCode::InvalidArgument, "need n >= 1 and trials >= 0");
  int recovered = 0, preserved = 0, witnessed = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(t));
    const StandardForm sf{std::exp(uniform(-1.0, 1.0, rng)), random_conditioned(n, kVerifyConditionCap, rng),
                          uniform_int(0, 1, rng) == 1};
    const MatrixSpaceMap phi = from_standard(sf);
    const AnalysisResult r = analyze(phi, {}, SearchOptions{kFalsifyDefaultBudget, seed});
    if (r.verdict == Verdict::StandardPreserver && r.form->transposed == sf.transposed &&
        std::abs(r.form->c - sf.c) <= kVerifyScaleRel * sf.c &&
        (r.form->p - normalize_conjugator(sf.p)).norm() <= kVerifyConjugatorDist)
      ++recovered;
    const Matrix a = expm(random_gaussian(n, n, rng) * (0.5 / std::sqrt(static_cast<double>(n))));
    const Matrix image = apply(phi, a);
    if (in_K(a).in_set == in_K(image).in_set && in_K_star(a).in_set == in_K_star(image).in_set) ++preserved;

    if (n < 2) continue;
    const Matrix p = random_conditioned(n, kVerifyConditionCap, rng);
    const Matrix q = random_conditioned(n, kVerifyConditionCap, rng);
    const AnalysisResult bad = analyze(from_two_sided(p, q, uniform_int(0, 1, rng) == 1), {},
                                       SearchOptions{kFalsifyDefaultBudget, seed + static_cast<std::uint64_t>(t)});
    if (bad.verdict == Verdict::NotPreserver) ++witnessed;
  }
  const int contra_trials = n < 2 ? 0 : trials;
  Json j;
  j["n"] = n;
  j["trials"] = trials;
  j["seed"] = seed;
  j["forward"] = Json{{"recovered", recovered}, {"membership_preserved", preserved}};
  j["contrapositive"] = Json{{"trials", contra_trials}, {"witnessed", witnessed}};
  const bool ok = recovered == trials && preserved == trials && witnessed == contra_trials;
  j["passed"] = ok;
  emit(out, j);
  return ok ? kOk : kVerdictFalse;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Real and principal logarithms of real matrices, and preservers of the sets that admit them"};
  app.require_subcommand(1);

  std::string in, dest, set = "Kstar", mode = "principal";
  std::uint64_t seed = 0;
  int budget = kFalsifyDefaultBudget, n = 2, trials = 10, degree = 1, samples = 20;
  double theta = 0.0;

  auto* check = app.add_subcommand("check", "membership in K, Kstar or closure");
  check->add_option("--in", in, "matrix JSON file")->required();
  check->add_option("--set", set)->check(CLI::IsMember({"K", "Kstar", "closure"}));

  auto* logm = app.add_subcommand("logm", "principal or paired real logarithm");
  logm->add_option("--in", in)->required();
  logm->add_option("--out", dest);
  logm->add_option("--mode", mode)->check(CLI::IsMember({"principal", "paired"}));

  auto* expm_cmd = app.add_subcommand("expm", "matrix exponential");
  expm_cmd->add_option("--in", in)->required();
  expm_cmd->add_option("--out", dest);

  auto* analyze_cmd = app.add_subcommand("analyze-map", "standard form or witness for a linear map");
  analyze_cmd->add_option("--in", in)->required();
  analyze_cmd->add_option("--seed", seed);

  auto* falsify = app.add_subcommand("falsify", "budgeted witness search");
  falsify->add_option("--in", in)->required();
  falsify->add_option("--set", set)->check(CLI::IsMember({"K", "Kstar"}));
  falsify->add_option("--budget", budget)->check(CLI::NonNegativeNumber);
  falsify->add_option("--seed", seed);

  auto* gadgets = app.add_subcommand("gadgets", "shear and product gadgets at one angle");
  gadgets->add_option("--theta", theta)->required();

  auto* verify = app.add_subcommand("verify-theorem", "randomized check of both directions of the preserver theorem");
  verify->add_option("--n", n)->check(CLI::PositiveNumber);
  verify->add_option("--trials", trials)->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", seed);

  auto* density = app.add_subcommand("density", "polynomial non-vanishing witness on samples from K");
  density->add_option("--n", n)->check(CLI::PositiveNumber);
  density->add_option("--degree", degree)->check(CLI::NonNegativeNumber);
  density->add_option("--samples", samples)->check(CLI::PositiveNumber);
  density->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (check->parsed()) return cmd_check(in, set, out);
    if (logm->parsed()) return cmd_logm(in, dest, mode, out);
    if (expm_cmd->parsed()) return cmd_expm(in, dest, out);
    if (analyze_cmd->parsed()) return cmd_analyze(in, seed, out);
    if (falsify->parsed()) return cmd_falsify(in, set, budget, seed, out);
    if (gadgets->parsed()) return cmd_gadgets(theta, out);
    if (verify->parsed()) return cmd_verify(n, trials, seed, out);
    if (density->parsed()) return cmd_density(n, degree, samples, seed, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.is_input_error() ? kInputError : kNumericalFailure;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kNumericalFailure;
  }
  return kInputError;
}

}  // namespace reallog::cli
