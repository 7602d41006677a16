#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgopt/fgopt.hpp"

namespace fgopt {

using json = nlohmann::json;

/// A named, seeded, parameterized run. Identical spec + seed produce
/// byte-identical CSV output.
struct ExperimentSpec {
  std::string name;
  json params;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

struct NamedTrace {
  std::string name;  // file stem suffix
  Trace trace;
};

struct ExperimentDef {
  std::string name;
  std::string description;
  json default_params;
  std::function<std::vector<NamedTrace>(const json& params, std::uint64_t seed)> run;
};

inline std::string config_digest(const ExperimentSpec& spec) {
  std::string blob = spec.name + "|" + spec.params.dump() + "|" + std::to_string(spec.seed);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(Rng::fnv1a(blob)));
  return buf;
}

/// Write a file atomically (temp + rename).
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os << contents;
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// experiment catalog
// ---------------------------------------------------------------------------

namespace experiments {

inline std::shared_ptr<QuadraticObjective> seeded_quadratic(int d, double kappa, std::uint64_t seed) {
  Vec diag(d);
  for (int i = 0; i < d; ++i) diag[i] = 1.0 + (kappa - 1.0) * i / std::max(1, d - 1);
  Mat G = diag.asDiagonal();
  Rng rng(Rng::derive(seed, "quadratic-b"));
  return make_quadratic(G, rng.gaussian_vector(d));
}

/// Conditional-gradient run of criterion-1 shape: f(w) = 1/2|w - (2,0)|^2
/// over the unit ball. Columns: t, f_value, gap.
inline std::vector<NamedTrace> fw_quadratic_ball(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const std::string variant = p.value("weights", "linear");
  Vec c(2);
  c << 2.0, 0.0;
  auto f = make_quadratic(Mat::Identity(2, 2), Vec(-c));
  auto ball = std::make_shared<L2Ball>(2, 1.0);
  const double f_star = f->value(Vec(c / c.norm()));

  PresetParams pp;
  pp.f = f;
  pp.set = ball;
  pp.T = T;
  pp.seed = seed;
  Vec x0(2);
  x0 << 0.0, 1.0;
  pp.x0 = x0;
  std::string preset_name = variant == "uniform"   ? "fw_uniform"
                            : variant == "adaptive" ? "fw_linear_rate"
                                                    : "frank_wolfe";
  const bool adaptive = variant == "adaptive";
  auto res = run_dynamics(preset(preset_name, pp), ball.get());

  std::vector<std::string> cols{"f_value", "gap"};
  if (adaptive) {
    cols.push_back("alpha");
    cols.push_back("nu_min_grad");
  }
  Trace out(cols);
  out.seed = seed;
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    std::vector<double> row{res.trace.value(i, "f_value"), res.trace.value(i, "f_value") - f_star};
    if (adaptive) {
      row.push_back(res.trace.value(i, "alpha"));
      row.push_back(res.trace.value(i, "nu_min_grad"));
    }
    out.add_row(res.trace.iteration(i), row);
  }
  return {{"", std::move(out)}};
}

inline std::vector<NamedTrace> nesterov_quadratic(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const int d = p.value("dim", 6);
  const double kappa = p.value("kappa", 100.0);
  const std::string name = p.value("preset", "nesterov_first");
  auto f = seeded_quadratic(d, kappa, seed);
  Vec wstar = f->minimizer();
  PresetParams pp;
  pp.f = f;
  pp.T = T;
  pp.x0 = Vec::Zero(d);
  pp.x_star = wstar;
  pp.seed = seed;
  auto res = run_dynamics(preset(name, pp), nullptr);
  const double fstar = f->value(wstar);
  Trace out({"f_value", "gap", "gap_est"});
  out.seed = seed;
  for (std::size_t i = 0; i < res.trace.size(); ++i)
    out.add_row(res.trace.iteration(i), {res.trace.value(i, "f_value"), res.trace.value(i, "f_value") - fstar,
                                         res.trace.value(i, "gap_est")});
  return {{"", std::move(out)}};
}

inline std::vector<NamedTrace> accel_linear_quadratic(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const int d = p.value("dim", 6);
  const double kappa = p.value("kappa", 25.0);
  auto f = seeded_quadratic(d, kappa, seed);
  Vec wstar = f->minimizer();
  PresetParams pp;
  pp.f = f;
  pp.T = T;
  pp.x0 = Vec::Zero(d);
  pp.x_star = wstar;
  pp.seed = seed;
  auto res = run_dynamics(preset("accel_linear", pp), nullptr);
  const double fstar = f->value(wstar);
  Trace out({"gap"});
  out.seed = seed;
  for (std::size_t i = 0; i < res.trace.size(); ++i)
    out.add_row(res.trace.iteration(i), {res.trace.value(i, "f_value") - fstar});
  return {{"", std::move(out)}};
}

inline std::vector<NamedTrace> incremental_fw_ball(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const int d = p.value("dim", 4);
  const int n = p.value("samples", 8);
  Rng rng(Rng::derive(seed, "incfw"));
  auto centers = std::make_shared<std::vector<Vec>>();
  for (int i = 0; i < n; ++i) centers->push_back(rng.gaussian_vector(d));
  auto f = std::make_shared<FiniteSumObjective>(
      d, n,
      [centers, n](const Vec& w) {
        double s = 0.0;
        for (const auto& c : *centers) s += 0.5 * (w - c).squaredNorm();
        return s / n;
      },
      [centers, n, d](const Vec& w) {
        Vec g = Vec::Zero(d);
        for (const auto& c : *centers) g += w - c;
        return Vec(g / n);
      },
      [centers](const Vec& w, int i) { return Vec(w - (*centers)[i]); }, 1.0);
  auto ball = std::make_shared<L2Ball>(d, 1.0);
  PresetParams pp;
  pp.f = f;
  pp.set = ball;
  pp.T = T;
  pp.x0 = ball->canonical_point();
  pp.seed = seed;
  auto res = run_dynamics(preset("incremental_fw", pp), ball.get());
  Trace out({"f_value", "grad_norm"});
  out.seed = seed;
  for (std::size_t i = 0; i < res.trace.size(); ++i)
    out.add_row(res.trace.iteration(i), {res.trace.value(i, "f_value"), res.trace.value(i, "grad_norm")});
  return {{"", std::move(out)}};
}

inline std::vector<NamedTrace> gauge_fw_ball(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const int d = p.value("dim", 2);
  Rng rng(Rng::derive(seed, "gaugefw"));
  Vec c = 0.5 * rng.sphere_vector(d);  // interior optimum
  auto f = make_quadratic(Mat::Identity(d, d), Vec(-c));
  L2Ball ball(d, 1.0);
  auto r = gauge_fw(*f, ball, T);
  const double fstar = f->value(c);
  Trace out({"f_value", "gap", "rho", "gauge_xbar"});
  out.seed = seed;
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    out.add_row(r.trace.iteration(i), {r.trace.value(i, "f_value"), r.trace.value(i, "f_value") - fstar,
                                       r.trace.value(i, "rho"), r.trace.value(i, "gauge_xbar")});
  return {{"", std::move(out)}};
}

inline std::vector<NamedTrace> boundary_fw_ball(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const int d = p.value("dim", 3);
  Rng rng(Rng::derive(seed, "boundary"));
  Vec c = 2.0 * rng.sphere_vector(d);  // optimum on the boundary
  auto f = std::make_shared<SubgradientObjective>(
      d, [c](const Vec& w) { return (w - c).norm(); },
      [c](const Vec& w) {
        Vec g = w - c;
        const double n = g.norm();
        return n > 0.0 ? Vec(g / n) : Vec(Vec::Zero(w.size()));
      },
      1.0);
  L2Ball ball(d, 1.0);
  auto r = boundary_fw(*f, ball, T);
  r.trace.seed = seed;
  return {{"", std::move(r.trace)}};
}

inline std::vector<NamedTrace> nuclear_completion(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const int d1 = p.value("rows", 10), d2 = p.value("cols", 10);
  const double delta = p.value("delta", 0.1);
  const int workers = p.value("workers", 1);
  Rng rng(Rng::derive(seed, "nuclear-target"));
  Vec u = rng.gaussian_vector(d1), v = rng.gaussian_vector(d2);
  Mat target = u * v.transpose();
  const double radius = u.norm() * v.norm();
  MatrixObjective mo;
  mo.d1 = d1;
  mo.d2 = d2;
  mo.L = 1.0;
  mo.value = [target](const Mat& W) { return 0.5 * (W - target).squaredNorm(); };
  mo.gradient = [target](const Mat& W) { return Mat(W - target); };
  auto res = nuclear_run(mo, radius, 0.0, delta, T, seed, workers);
  return {{"", std::move(res.trace)}};
}

inline std::vector<NamedTrace> heavy_ball_quadratic(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const double kappa = p.value("kappa", 100.0);
  const int d = p.value("dim", 5);
  auto f = seeded_quadratic(d, kappa, seed);
  Vec wstar = f->minimizer();
  auto cfg = tuned_params(MomentumProblem::quadratic, 1.0, kappa);
  cfg.w0 = Vec::Zero(d);
  auto tr = heavy_ball_run(cfg, *f, T, wstar);
  const double init = std::sqrt(2.0) * wstar.norm();
  const double sb = 1.0 - 0.5 / std::sqrt(kappa);
  Trace out({"f_value", "stacked_residual", "bound"});
  out.seed = seed;
  double pw = 1.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    pw *= sb;
    out.add_row(tr.iteration(i), {tr.value(i, "f_value"), tr.value(i, "stacked_residual"),
                                  pw * 4.0 * std::sqrt(kappa) * init});
  }
  return {{"", std::move(out)}};
}

inline std::vector<NamedTrace> cubic_regularized(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const double eta = p.value("eta", 0.01);
  auto inst = make_cubic_instance(seed);
  std::vector<NamedTrace> outs;
  for (double beta : p.value("betas", std::vector<double>{0.0, 0.5, 0.9})) {
    MomentumConfig cfg;
    cfg.eta = eta;
    cfg.beta = beta;
    Rng rng(Rng::derive(seed, "cubic-w0"));
    cfg.w0 = rng.gaussian_vector(inst.f->dim());
    auto tr = cubic_regularized_experiment(inst, cfg, T);
    tr.seed = seed;
    char tag[32];
    std::snprintf(tag, sizeof(tag), "beta%.2f", beta);
    outs.push_back({tag, std::move(tr)});
  }
  return outs;
}

inline std::vector<NamedTrace> relu_ntk(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const int n = p.value("samples", 5), d = p.value("dim", 10), m = p.value("width", 1000);
  Rng rng(Rng::derive(seed, "relu-data"));
  Mat X(d, n);
  for (int i = 0; i < n; ++i) {
    Vec x = rng.gaussian_vector(d);
    X.col(i) = x / x.norm();
  }
  Vec y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.next_double() < 0.5 ? -1.0 : 1.0;

  ReluNet probe(m, X, y, seed + 1000);
  Mat H0 = probe.gram();
  Eigen::SelfAdjointEigenSolver<Mat> es(H0, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
  // Mean-loss normalized effective step; beta tuned for the effective
  // curvature eta * H / n (see README and the momentum notes).
  const double eta = 1.0 / (n * lmax);
  const double beta = std::pow(1.0 - 0.5 * std::sqrt(eta * lmin), 2);

  std::vector<NamedTrace> outs;
  ReluNet hb(m, X, y, seed + 1000);
  auto t1 = hb.train(eta, beta, T);
  t1.seed = seed;
  outs.push_back({"momentum", std::move(t1)});
  ReluNet gd(m, X, y, seed + 1000);
  auto t2 = gd.train(eta, 0.0, T);
  t2.seed = seed;
  outs.push_back({"gd", std::move(t2)});
  return outs;
}

inline std::vector<NamedTrace> deep_linear(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const int d = p.value("dim", 4), dy = p.value("dim_out", 4);
  const int m = p.value("width", 16), L = p.value("depth", 10);
  const int n = p.value("samples", 5);
  Rng rng(Rng::derive(seed, "dln-data"));
  Mat X = rng.gaussian_matrix(d, n);
  Mat Wstar = Mat::Identity(dy, d) + 0.1 * rng.gaussian_matrix(dy, d);
  Mat Y = Wstar * X;
  Eigen::JacobiSVD<Mat> svd(X);
  const double smax = svd.singularValues().maxCoeff(), smin = svd.singularValues().minCoeff();
  auto cfg = tuned_params(MomentumProblem::deep_linear, smin * smin, smax * smax, dy, L);

  std::vector<NamedTrace> outs;
  DeepLinearNet hb(L, m, d, dy, seed + 7);
  auto t1 = hb.train(X, Y, cfg.eta, cfg.beta, T);
  t1.seed = seed;
  outs.push_back({"momentum", std::move(t1)});
  DeepLinearNet gd(L, m, d, dy, seed + 7);
  auto t2 = gd.train(X, Y, cfg.eta, 0.0, T);
  t2.seed = seed;
  outs.push_back({"gd", std::move(t2)});
  return outs;
}

inline std::vector<NamedTrace> saddle_beta_sweep(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const int n = p.value("samples", 10);
  const double eta = p.value("eta", 5e-5);
  const double escape_level = p.value("escape_level", -0.01);
  const int stride = p.value("stride", 100);
  auto f = toy_saddle_objective(n, Rng::derive(seed, "toy"));

  std::vector<NamedTrace> outs;
  Trace summary({"beta", "first_escape_t"});
  summary.seed = seed;
  int row = 0;
  for (double beta : p.value("betas", std::vector<double>{0.0, 0.3, 0.5, 0.7, 0.9})) {
    SaddleConfig cfg;
    cfg.eta = eta;
    cfg.r = p.value("boost", eta);
    cfg.beta = beta;
    cfg.T_thred = p.value("T_thred", 1000);
    cfg.T = T;
    cfg.seed = seed;
    auto res = cnc_sgd_run(*f, cfg, Vec::Zero(2));
    long long first = -1;
    Trace thin({"f_value", "grad_norm"});
    thin.seed = seed;
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
      if (first < 0 && res.trace.value(i, "f_value") <= escape_level) first = res.trace.iteration(i);
      if (res.trace.iteration(i) % stride == 0)
        thin.add_row(res.trace.iteration(i), {res.trace.value(i, "f_value"), res.trace.value(i, "grad_norm")});
    }
    char tag[32];
    std::snprintf(tag, sizeof(tag), "beta%.2f", beta);
    outs.push_back({tag, std::move(thin)});
    summary.add_row(row++, {beta, static_cast<double>(first)});
  }
  outs.push_back({"summary", std::move(summary)});
  return outs;
}

inline std::vector<NamedTrace> phase_retrieval(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const int n = p.value("samples", 200), d = p.value("dim", 10);
  const double eta = p.value("eta", 5e-4);
  const int stride = p.value("stride", 100);
  auto prob = phase_retrieval_objective(n, d, Rng::derive(seed, "phase-data"));
  Rng rng(Rng::derive(seed, "phase-w0"));
  Vec w0 = rng.gaussian_vector(d) / std::sqrt(10000.0 * d);

  std::vector<NamedTrace> outs;
  for (double beta : p.value("betas", std::vector<double>{0.0, 0.9})) {
    SaddleConfig cfg;
    cfg.eta = eta;
    cfg.r = eta;
    cfg.beta = beta;
    cfg.T_thred = T + 1;
    cfg.T = T;
    cfg.seed = seed;
    auto metric = [&prob](const Vec& w) { return prob.relative_distance(w); };
    auto res = cnc_sgd_run(*prob.objective, cfg, w0, false, metric);
    Trace thin({"f_value", "rel_dist"});
    thin.seed = seed;
    for (std::size_t i = 0; i < res.trace.size(); ++i)
      if (res.trace.iteration(i) % stride == 0)
        thin.add_row(res.trace.iteration(i), {res.trace.value(i, "f_value"), res.trace.value(i, "metric")});
    char tag[32];
    std::snprintf(tag, sizeof(tag), "beta%.2f", beta);
    outs.push_back({tag, std::move(thin)});
  }
  return outs;
}

inline std::vector<NamedTrace> saddle_diagnostics(const json& p, std::uint64_t seed) {
  const int T = p.at("T").get<int>();
  const double eta = p.value("eta", 5e-5);
  const double beta = p.value("beta", 0.9);
  const double eps = p.value("eps", 0.02);
  const int tau = p.value("tau", 500);
  const int stride = p.value("stride", 200);
  auto f = toy_saddle_objective(p.value("samples", 10), Rng::derive(seed, "toy"));

  SaddleConfig cfg;
  cfg.eta = eta;
  cfg.r = eta;
  cfg.beta = beta;
  cfg.T_thred = T + 1;
  cfg.T = T;
  cfg.seed = seed;
  SaddleDiagnostics diag(eta, beta, tau, eps);

  Trace out({"apag_ratio", "apcg_ratio", "grace_value", "cnc_proxy", "apag_regime", "apcg_regime"});
  out.seed = seed;
  Vec w = Vec::Zero(2), m = Vec::Zero(2);
  for (int t = 0; t <= T; ++t) {
    Vec g = f->stochastic_gradient(w, Rng::derive(seed, "sgd", static_cast<std::uint64_t>(t)));
    m = beta * m + g;
    if (t % stride == 0) {
      auto row = diag.evaluate(*f, t, w, g, m);
      out.add_row(t, {row.apag_ratio, row.apcg_ratio, row.grace_value, row.cnc_proxy,
                      row.apag_regime ? 1.0 : 0.0, row.apcg_regime ? 1.0 : 0.0});
    }
    w -= eta * m;
  }
  return {{"", std::move(out)}};
}

}  // namespace experiments

inline const std::vector<ExperimentDef>& experiment_registry() {
  static const std::vector<ExperimentDef> defs = [] {
    std::vector<ExperimentDef> v;
    auto add = [&](std::string name, std::string desc, json params, auto fn) {
      v.push_back({std::move(name), std::move(desc), std::move(params), fn});
    };
    add("fw_quadratic_ball", "conditional gradient on a quadratic over the unit ball",
        {{"T", 1000}, {"weights", "linear"}}, experiments::fw_quadratic_ball);
    add("fw_linear_rate_ball", "adaptively weighted conditional gradient (linear-rate variant)",
        {{"T", 1000}, {"weights", "adaptive"}}, experiments::fw_quadratic_ball);
    add("nesterov_quadratic", "accelerated presets on a seeded quadratic",
        {{"T", 500}, {"kappa", 100.0}, {"dim", 6}, {"preset", "nesterov_first"}}, experiments::nesterov_quadratic);
    add("accel_linear_quadratic", "linear-rate accelerated method on a strongly convex quadratic",
        {{"T", 200}, {"kappa", 25.0}, {"dim", 6}}, experiments::accel_linear_quadratic);
    add("incremental_fw_ball", "cyclic incremental conditional gradient on a finite sum",
        {{"T", 500}, {"dim", 4}, {"samples", 8}}, experiments::incremental_fw_ball);
    add("gauge_fw_ball", "gauge-regularized conditional gradient on the unit ball",
        {{"T", 500}, {"dim", 2}}, experiments::gauge_fw_ball);
    add("boundary_fw_ball", "subgradient conditional gradient on a strongly convex set",
        {{"T", 2000}, {"dim", 3}}, experiments::boundary_fw_ball);
    add("nuclear_completion", "randomized spectrahedron solver, rank-1 matrix completion",
        {{"T", 300}, {"rows", 10}, {"cols", 10}, {"delta", 0.1}, {"workers", 1}}, experiments::nuclear_completion);
    add("heavy_ball_quadratic", "tuned heavy-ball run with the residual envelope",
        {{"T", 5000}, {"kappa", 100.0}, {"dim", 5}}, experiments::heavy_ball_quadratic);
    add("cubic_regularized", "heavy-ball sweep on the cubic-regularized objective",
        {{"T", 20000}, {"eta", 0.01}, {"betas", {0.0, 0.5, 0.9}}}, experiments::cubic_regularized);
    add("relu_ntk", "wide one-layer ReLU net, momentum vs gradient descent",
        {{"T", 200}, {"samples", 5}, {"dim", 10}, {"width", 1000}}, experiments::relu_ntk);
    add("deep_linear", "deep linear net under orthogonal init, momentum vs gradient descent",
        {{"T", 500}, {"dim", 4}, {"dim_out", 4}, {"width", 16}, {"depth", 10}, {"samples", 5}},
        experiments::deep_linear);
    add("saddle_beta_sweep", "escape times of stochastic momentum on the toy saddle",
        {{"T", 4000000}, {"samples", 10}, {"eta", 5e-5}, {"betas", {0.0, 0.3, 0.5, 0.7, 0.9}},
         {"escape_level", -0.01}, {"stride", 100}},
        experiments::saddle_beta_sweep);
    add("phase_retrieval", "stochastic momentum on phase retrieval, relative distance",
        {{"T", 100000}, {"samples", 200}, {"dim", 10}, {"eta", 5e-4}, {"betas", {0.0, 0.9}}, {"stride", 100}},
        experiments::phase_retrieval);
    add("saddle_diagnostics", "momentum alignment/curvature diagnostics on the toy saddle",
        {{"T", 400000}, {"samples", 10}, {"eta", 5e-5}, {"beta", 0.9}, {"eps", 0.02}, {"tau", 500}, {"stride", 200}},
        experiments::saddle_diagnostics);
    return v;
  }();
  return defs;
}

inline const ExperimentDef& find_experiment(const std::string& name) {
  for (const auto& def : experiment_registry())
    if (def.name == name) return def;
  std::string known;
  for (const auto& def : experiment_registry()) known += (known.empty() ? "" : ", ") + def.name;
  throw std::invalid_argument("unknown experiment '" + name + "'; known experiments: " + known);
}

/// Execute a spec: one CSV per produced trace plus a JSON sidecar with seed,
/// config digest and library version. Returns the written file paths.
inline std::vector<std::string> run_experiment(const ExperimentSpec& spec) {
  const ExperimentDef& def = find_experiment(spec.name);
  json params = def.default_params;
  for (auto it = spec.params.begin(); it != spec.params.end(); ++it) {
    if (!params.contains(it.key()))
      throw std::invalid_argument("experiment '" + spec.name + "' has no parameter '" + it.key() + "'");
    params[it.key()] = it.value();
  }

  auto traces = def.run(params, spec.seed);

  std::filesystem::create_directories(spec.out_dir);
  std::vector<std::string> files;
  json sidecar;
  sidecar["experiment"] = spec.name;
  sidecar["seed"] = spec.seed;
  sidecar["params"] = params;
  ExperimentSpec resolved = spec;
  resolved.params = params;
  sidecar["config_digest"] = config_digest(resolved);
  sidecar["version"] = kVersion;
  json warnings = json::array();

  for (const auto& nt : traces) {
    std::string stem = spec.name + (nt.name.empty() ? "" : "__" + nt.name);
    std::filesystem::path csv = std::filesystem::path(spec.out_dir) / (stem + ".csv");
    std::ostringstream os;
    nt.trace.write_csv(os);
    write_file_atomic(csv, os.str());
    files.push_back(csv.string());
    for (const auto& w : nt.trace.warnings) warnings.push_back(nt.name + ": " + w);
  }
  sidecar["warnings"] = warnings;
  sidecar["files"] = files;
  std::filesystem::path meta = std::filesystem::path(spec.out_dir) / (spec.name + ".json");
  write_file_atomic(meta, sidecar.dump(2) + "\n");
  files.push_back(meta.string());
  return files;
}

}  // namespace fgopt
