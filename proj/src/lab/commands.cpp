#include "pnl/lab/commands.hpp"

#include "pnl/channels.hpp"
#include "pnl/haar_moments.hpp"
#include "pnl/lab/report_io.hpp"
#include "pnl/random_ensembles.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace pnl::lab {

using nlohmann::json;

namespace {

json number_or_text(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json p_to_json(RenyiOrder p) {
  if (p.is_infinite()) return "inf";
  return p.value();
}

RenyiOrder p_from_json(const json& j) {
  if (j.is_string()) return RenyiOrder::parse(j.get<std::string>());
  return RenyiOrder(j.get<double>());
}

Index dim_param(const json& params, const char* key) {
  const auto v = params.at(key).get<long long>();
  if (v < 1) throw DimensionError(std::string(key) + " must be >= 1");
  return static_cast<Index>(v);
}

EstimatorConfig estimator_from(const json& params, std::uint64_t seed) {
  EstimatorConfig cfg;
  cfg.samples = params.value("samples", cfg.samples);
  cfg.restarts = params.value("restarts", cfg.restarts);
  cfg.max_iters = params.value("max_iters", cfg.max_iters);
  cfg.step_tol = params.value("step_tol", cfg.step_tol);
  cfg.master_seed = seed;
  cfg.validate();
  return cfg;
}

std::string file_param(const json& params, const char* key) { return params.value(key, std::string()); }

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

// ------------------------------------------------------------------ spectrum

SpectrumRun spectrum_experiment(Index dim_a, Index dim_b, Index dim_r, std::uint64_t seed) {
  const BipartiteDims dims(dim_a, dim_b);
  if (dim_r < 1 || dims.total() % dim_r != 0)
    throw DimensionError("spectrum: dimA * dimB must be divisible by dimR");
  check_dense_size(dim_a * dim_a, dim_b * dim_b, "spectrum");
  const Index dim_s = dims.total() / dim_r;

  SeededRng rng(seed, kChannelStream);
  const StinespringChannel n(random_isometry(rng, dim_s, dims), dims);
  const Channel ch = n;
  const Channel conj = n.conjugate();
  const Spectrum spec = eigen_spectrum(apply_product_to_state(ch, conj, make_max_entangled(dim_s)));

  SpectrumRun run{dims, dim_s, {}, spec.max(), 0, 0, 0, 0, 0, {}};
  const RealVector lam = spec.clamped();
  run.ascending.assign(lam.data(), lam.data() + lam.size());
  std::reverse(run.ascending.begin(), run.ascending.end());
  run.ratio_line = static_cast<double>(dim_s) / static_cast<double>(dims.total());
  run.flat_line = (1.0 - run.ratio_line) / static_cast<double>(dim_a * dim_a);
  run.tail_purity = lam.tail(lam.size() - 1).squaredNorm();
  run.h1 = renyi_entropy(spec, RenyiOrder::von_neumann());
  run.h2 = renyi_entropy(spec, RenyiOrder(2.0));
  run.grouping = grouping_decomposition(spec);
  return run;
}

CommandOutcome run_spectrum(const json& params) {
  const auto seed = params.at("seed").get<std::uint64_t>();
  const SpectrumRun run = spectrum_experiment(dim_param(params, "dim_a"), dim_param(params, "dim_b"),
                                              dim_param(params, "dim_r"), seed);
  json files = json::object();
  if (const std::string csv = file_param(params, "out"); !csv.empty()) {
    write_spectrum_csv(csv, run.ascending);
    files["csv"] = csv;
  }
  if (const std::string svg = file_param(params, "svg"); !svg.empty()) {
    write_spectrum_svg(svg, run.ascending,
                       {{run.ratio_line, "green", true, "dimS/(dimA dimB) = " + fixed(run.ratio_line)},
                        {run.flat_line, "red", false, "(1 - dimS/(dimA dimB))/dimA^2 = " + fixed(run.flat_line)}},
                       params.value("log_y", false));
    files["svg"] = svg;
  }

  CommandOutcome out;
  out.streams = {{"isometry", kChannelStream, 1}};
  out.outputs = {{"dim_s", run.dim_s},
                 {"lambda_max", run.lambda_max},
                 {"lambda_min", run.ascending.front()},
                 {"ratio_line", run.ratio_line},
                 {"flat_line", run.flat_line},
                 {"tail_purity", run.tail_purity},
                 {"h1", run.h1},
                 {"h2", run.h2},
                 {"grouping",
                  {{"lambda1", run.grouping.lambda1},
                   {"h_binary", run.grouping.h_binary},
                   {"tail_entropy", run.grouping.tail_entropy},
                   {"total", run.grouping.total}}},
                 {"files", files}};
  std::ostringstream s;
  s << "spectrum of (N (x) conj N)(Phi), dims A=" << run.dims.a << " B=" << run.dims.b << " S=" << run.dim_s << "\n"
    << "  lambda_max            " << fixed(run.lambda_max, 10) << "   (guaranteed >= " << fixed(run.ratio_line, 10)
    << ")\n"
    << "  flat reference line   " << fixed(run.flat_line, 10) << "\n"
    << "  tail purity           " << fixed(run.tail_purity, 10) << "\n"
    << "  H_1 / H_2 (nats)      " << fixed(run.h1, 10) << " / " << fixed(run.h2, 10) << "\n"
    << "  grouping: h(l1) + (1-l1) H_1(tail) = " << fixed(run.grouping.h_binary, 8) << " + "
    << fixed(1.0 - run.grouping.lambda1, 8) << " * " << fixed(run.grouping.tail_entropy, 8) << "\n";
  out.summary = s.str();
  return out;
}

// ----------------------------------------------------------------- violation

json ViolationReport::to_json() const {
  return {{"p", p_to_json(p)},
          {"dim_a", dim_a},
          {"dim_b", dim_b},
          {"dim_s", dim_s},
          {"hmin_hat_n", hmin_hat_n},
          {"hmin_hat_nbar", hmin_hat_nbar},
          {"h_product_phi", h_product_phi},
          {"gap", gap},
          {"bound_check", bound_check},
          {"seed", seed}};
}

ViolationRun violation_experiment(RenyiOrder p, BipartiteDims dims, Index dim_s, const EstimatorConfig& settings,
                                  std::uint64_t seed) {
  if (!(p.value() > 1.0)) throw std::invalid_argument("violation: requires p > 1");
  if (dim_s < 1 || dim_s > dims.total()) throw DimensionError("violation: dimS must lie in [1, dimA * dimB]");
  check_dense_size(dims.a * dims.a, dims.a * dims.a, "violation product output");

  SeededRng rng(seed, kChannelStream);
  const StinespringChannel n(random_isometry(rng, dim_s, dims), dims);
  const Channel ch = n;
  const Channel conj = n.conjugate();

  EstimatorConfig cfg_n = settings;
  cfg_n.master_seed = seed;
  cfg_n.stream_base = kEstimatorStreamN;
  EstimatorConfig cfg_nbar = cfg_n;
  cfg_nbar.stream_base = kEstimatorStreamNbar;

  ViolationRun run{{p, dims.a, dims.b, dim_s, 0, 0, 0, 0, 0, seed},
                   min_output_entropy_estimate(ch, p, cfg_n),
                   min_output_entropy_estimate(conj, p, cfg_nbar),
                   0.0};
  const Spectrum spec = eigen_spectrum(apply_product_to_state(ch, conj, make_max_entangled(dim_s)));
  run.lambda_max = spec.max();
  run.report.hmin_hat_n = run.est_n.hmin_hat;
  run.report.hmin_hat_nbar = run.est_nbar.hmin_hat;
  run.report.h_product_phi = renyi_entropy(spec, p);
  run.report.gap = run.report.hmin_hat_n + run.report.hmin_hat_nbar - run.report.h_product_phi;
  run.report.bound_check = product_output_entropy_bound(p, dims, dim_s);
  return run;
}

CommandOutcome run_violation(const json& params) {
  const auto seed = params.at("seed").get<std::uint64_t>();
  const RenyiOrder p = p_from_json(params.at("p"));
  const BipartiteDims dims(dim_param(params, "dim_a"), dim_param(params, "dim_b"));
  const EstimatorConfig cfg = estimator_from(params, seed);
  const ViolationRun run = violation_experiment(p, dims, dim_param(params, "dim_s"), cfg, seed);
  const ViolationReport& r = run.report;

  json files = json::object();
  if (const std::string path = file_param(params, "out"); !path.empty()) {
    write_json_file(path, r.to_json());
    files["report"] = path;
  }
  const std::uint64_t per_estimator = 1 + static_cast<std::uint64_t>(cfg.restarts);
  CommandOutcome out;
  out.streams = {{"isometry", kChannelStream, 1},
                 {"estimator_n", kEstimatorStreamN, per_estimator},
                 {"estimator_nbar", kEstimatorStreamNbar, per_estimator}};
  out.outputs = r.to_json();
  out.outputs["lambda_max"] = run.lambda_max;
  out.outputs["bound_holds"] = r.h_product_phi <= r.bound_check + 1e-8;
  out.outputs["estimator_n"] = {{"sampling", run.est_n.sampling_hmin}, {"optimizer", run.est_n.optimizer_hmin}};
  out.outputs["estimator_nbar"] = {{"sampling", run.est_nbar.sampling_hmin},
                                   {"optimizer", run.est_nbar.optimizer_hmin}};
  out.outputs["files"] = files;

  std::ostringstream s;
  s << "p = " << r.p.to_string() << ", dims A=" << r.dim_a << " B=" << r.dim_b << " S=" << r.dim_s << "\n"
    << "  H_p^min(N)     upper-bound estimate " << fixed(r.hmin_hat_n, 10) << "  (sampling "
    << fixed(run.est_n.sampling_hmin, 8) << ", optimizer " << fixed(run.est_n.optimizer_hmin, 8) << ")\n"
    << "  H_p^min(conj N) upper-bound estimate " << fixed(r.hmin_hat_nbar, 10) << "  (sampling "
    << fixed(run.est_nbar.sampling_hmin, 8) << ", optimizer " << fixed(run.est_nbar.optimizer_hmin, 8) << ")\n"
    << "  H_p((N (x) conj N)(Phi)) exact   " << fixed(r.h_product_phi, 10) << "  (bound "
    << fixed(r.bound_check, 10) << (out.outputs["bound_holds"].get<bool>() ? ", holds" : ", VIOLATED") << ")\n"
    << "  gap = " << fixed(r.gap, 10)
    << (r.gap > 0 ? "  > 0: minimum output entropy not additive for this instance\n"
                  : "  <= 0: no violation demonstrated for this instance\n");
  out.summary = s.str();
  return out;
}

// -------------------------------------------------------------- ru-violation

json RuViolationRun::to_json() const {
  return {{"p", p_to_json(p)},
          {"dim", dim},
          {"n", count},
          {"overlap", overlap},
          {"inverse_n", inverse_n},
          {"epsilon_hat", epsilon_hat},
          {"single_bound", single_bound},
          {"conditional_upper_bound", conditional_upper_bound},
          {"violation", violation},
          {"seed", seed}};
}

RuViolationRun ru_violation_experiment(RenyiOrder p, Index dim, Index count, bool pauli,
                                       const EstimatorConfig& settings, std::uint64_t seed) {
  if (!(p.value() > 1.0)) throw std::invalid_argument("ru-violation: requires p > 1");
  SeededRng rng(seed, kChannelStream);
  const RandomUnitaryChannel ch = pauli ? RandomUnitaryChannel::pauli() : RandomUnitaryChannel::haar(rng, dim, count);

  EstimatorConfig cfg = settings;
  cfg.master_seed = seed;
  cfg.stream_base = kEstimatorStreamN;
  const RandomizingEstimate eps = randomizing_deviation(ch, cfg);

  RuViolationRun run{p, ch.dim(), ch.count(), phi_overlap(ch), 1.0 / static_cast<double>(ch.count()),
                     eps.epsilon_hat, 0, 0, false, seed};
  run.single_bound = randomizing_p_norm_bound(run.epsilon_hat, run.dim, p);
  run.conditional_upper_bound = run.single_bound * run.single_bound;
  run.violation = run.overlap > run.conditional_upper_bound;
  return run;
}

CommandOutcome run_ru_violation(const json& params) {
  const auto seed = params.at("seed").get<std::uint64_t>();
  const RenyiOrder p = p_from_json(params.at("p"));
  const bool pauli = params.value("pauli", false);
  const Index dim = pauli ? 2 : dim_param(params, "dim");
  const Index count = pauli ? 4 : dim_param(params, "unitaries");
  const EstimatorConfig cfg = estimator_from(params, seed);
  const RuViolationRun run = ru_violation_experiment(p, dim, count, pauli, cfg, seed);

  json files = json::object();
  if (const std::string path = file_param(params, "out"); !path.empty()) {
    write_json_file(path, run.to_json());
    files["report"] = path;
  }
  CommandOutcome out;
  out.streams = {{"unitaries", kChannelStream, pauli ? 0u : 1u},
                 {"randomizing_estimator", kEstimatorStreamN, 1 + static_cast<std::uint64_t>(cfg.restarts)}};
  out.outputs = run.to_json();
  out.outputs["overlap_at_least_inverse_n"] = run.overlap >= run.inverse_n - 1e-9;
  out.outputs["files"] = files;

  std::ostringstream s;
  s << "random unitary channel d=" << run.dim << " n=" << run.count << (pauli ? " (Pauli family)" : " (Haar)")
    << ", p = " << run.p.to_string() << "\n"
    << "  nu_p(N (x) conj N) >= <Phi|out|Phi> = " << fixed(run.overlap, 10) << "  (1/n = " << fixed(run.inverse_n, 10)
    << ")\n"
    << "  epsilon_hat (lower-bound estimate of epsilon) = " << fixed(run.epsilon_hat, 10) << "\n"
    << "  nu_p(N) nu_p(conj N) <= " << fixed(run.conditional_upper_bound, 10)
    << "  (CONDITIONAL: valid only if epsilon_hat equals the true epsilon)\n"
    << (run.violation ? "  product lower bound exceeds the conditional upper bound: violation\n"
                      : "  conditional upper bound is not beaten: no violation at this size\n");
  if (!(p.value() > 2.0)) s << "  note: this family can only violate multiplicativity for p > 2\n";
  out.summary = s.str();
  return out;
}

// -------------------------------------------------------------------- purity

CommandOutcome run_purity(const json& params) {
  const auto seed = params.at("seed").get<std::uint64_t>();
  const BipartiteDims dims(dim_param(params, "dim_a"), dim_param(params, "dim_b"));
  const Index dim_s = dim_param(params, "dim_s");
  const int samples = params.value("samples", 1000);

  const double exact = exact_avg_purity(dims, dim_s);
  const MonteCarloEstimate mc = mc_avg_purity(dims, dim_s, samples, seed, 0);
  const double leading = std::pow(static_cast<double>(dim_s) / static_cast<double>(dims.total()), 2);
  const double diff = mc.mean - exact;
  // Purities carry rounding of order 1e-15, so standard errors below 1e-12 are not resolvable.
  const double sigmas = diff / std::max(mc.std_error, 1e-12);
  const double scaled = (exact - leading) * static_cast<double>(dims.a * dims.a);

  CommandOutcome out;
  out.streams = {{"isometries", 0, static_cast<std::uint64_t>(samples)}};
  out.outputs = {{"exact", exact},
                 {"mc_mean", mc.mean},
                 {"mc_stderr", mc.std_error},
                 {"mc_samples", samples},
                 {"difference_in_stderr", number_or_text(sigmas)},
                 {"leading_term", leading},
                 {"scaled_correction", scaled},
                 {"files", json::object()}};
  std::ostringstream s;
  s << "average purity of (N (x) conj N)(Phi), dims A=" << dims.a << " B=" << dims.b << " S=" << dim_s << "\n"
    << "  exact (Weingarten)     " << fixed(exact, 14) << "\n"
    << "  Monte Carlo            " << fixed(mc.mean, 14) << " +- " << fixed(mc.std_error, 6) << "  (" << samples
    << " samples, " << fixed(sigmas, 3) << " stderr from exact)\n"
    << "  leading term S^2/(AB)^2 " << fixed(leading, 14) << "\n"
    << "  (exact - leading) * dimA^2 = " << fixed(scaled, 8) << "\n";
  out.summary = s.str();
  if (const std::string path = file_param(params, "out"); !path.empty()) {
    write_json_file(path, out.outputs);
    out.outputs["files"]["report"] = path;
  }
  return out;
}

// -------------------------------------------------------------------- bounds

CommandOutcome run_bounds(const json& params) {
  const RenyiOrder p = p_from_json(params.at("p"));
  if (!(p.value() > 1.0)) throw std::invalid_argument("bounds: requires p > 1");
  const BipartiteDims dims(dim_param(params, "dim_a"), dim_param(params, "dim_b"));
  BoundsParams bp;
  bp.alpha = params.value("alpha", bp.alpha);
  bp.delta = params.value("delta", bp.delta);
  bp.gamma = params.value("gamma", bp.gamma);
  bp.c = params.value("c", bp.c);

  const SubspaceBound sb = subspace_dimension_bound(p, dims, bp);
  const double lip = lipschitz_bound(p, dims.a);

  CommandOutcome out;
  out.outputs = {{"dim_s", sb.dim_s},
                 {"dim_s_real", sb.dim_s_real},
                 {"beta", sb.beta},
                 {"log_failure_prob", sb.log_failure_prob},
                 {"failure_prob_bound", number_or_text(sb.failure_prob_bound)},
                 {"entropy_floor", sb.entropy_floor},
                 {"lipschitz_bound", lip},
                 {"dim_s_vacuous", sb.dim_s < 1},
                 {"probability_vacuous", !(sb.failure_prob_bound < 1.0)},
                 {"files", json::object()}};
  auto flag = [](bool vacuous) { return vacuous ? "   bound vacuous at this scale" : ""; };
  std::ostringstream s;
  s << "p = " << p.to_string() << ", dimA = " << dims.a << ", dimB = " << dims.b << ", alpha = " << bp.alpha
    << ", delta = " << bp.delta << ", gamma = " << bp.gamma << ", c = " << bp.c << "\n"
    << "  subspace dimension        " << sb.dim_s << "  (before floor " << fixed(sb.dim_s_real, 8) << ")"
    << flag(sb.dim_s < 1) << "\n"
    << "  failure probability bound " << fixed(sb.failure_prob_bound, 8) << "  (ln " << fixed(sb.log_failure_prob, 8)
    << ")" << flag(!(sb.failure_prob_bound < 1.0)) << "\n"
    << "  beta = gamma sqrt(A/B)    " << fixed(sb.beta, 8) << "\n"
    << "  entropy floor (nats)      " << fixed(sb.entropy_floor, 8) << flag(sb.entropy_floor <= 0.0) << "\n"
    << "  Lipschitz bound           " << fixed(lip, 8) << "\n";
  out.summary = s.str();
  if (const std::string path = file_param(params, "out"); !path.empty()) {
    write_json_file(path, out.outputs);
    out.outputs["files"]["report"] = path;
  }
  return out;
}

// ------------------------------------------------------------------ dispatch

CommandOutcome run_command(const std::string& name, const json& params) {
  if (name == "spectrum") return run_spectrum(params);
  if (name == "violation") return run_violation(params);
  if (name == "ru-violation") return run_ru_violation(params);
  if (name == "purity") return run_purity(params);
  if (name == "bounds") return run_bounds(params);
  throw std::invalid_argument("unknown command '" + name + "'");
}

ExperimentRecord execute(const std::string& name, const json& params, const std::filesystem::path& store,
                         std::string* summary) {
  const auto start = std::chrono::steady_clock::now();
  CommandOutcome outcome = run_command(name, params);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  ExperimentRecord rec;
  rec.command = name;
  rec.params = params;
  rec.master_seed = params.value("seed", std::uint64_t{0});
  rec.streams = std::move(outcome.streams);
  rec.generator = generator_id();
  rec.version = artifact_version();
  rec.duration_s = elapsed.count();
  rec.outputs = std::move(outcome.outputs);
  rec.timestamp = iso8601_utc_now();
  if (!store.empty()) append_record(store, rec);
  if (summary != nullptr) *summary = std::move(outcome.summary);
  return rec;
}

namespace {

void diff_json(const json& a, const json& b, const std::string& path, std::vector<std::string>& out) {
  if (a.is_object() && b.is_object()) {
    for (const auto& [key, value] : a.items()) {
      if (path.empty() && key == "files") continue;
      if (!b.contains(key)) {
        out.push_back(path + "/" + key + " missing on replay");
        continue;
      }
      diff_json(value, b.at(key), path + "/" + key, out);
    }
    for (const auto& [key, value] : b.items())
      if (!a.contains(key) && !(path.empty() && key == "files")) out.push_back(path + "/" + key + " new on replay");
    return;
  }
  if (a != b) out.push_back(path + ": " + a.dump() + " != " + b.dump());
}

}  // namespace

ReplayCheck replay(const ExperimentRecord& rec) {
  json params = rec.params;
  for (const char* key : {"out", "svg"})
    if (params.contains(key)) params[key] = "";
  const CommandOutcome again = run_command(rec.command, params);
  // Round-trip through text, as the stored record was.
  const json fresh = json::parse(again.outputs.dump());
  ReplayCheck check{true, {}};
  diff_json(rec.outputs, fresh, "", check.mismatches);
  check.identical = check.mismatches.empty();
  return check;
}

}  // namespace pnl::lab
