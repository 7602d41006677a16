#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fgopt/harness.hpp"

namespace fgopt {

// Verification suite: each row checks one published guarantee or experiment
// property at a pinned tolerance. Suites: rates, equivalence, momentum,
// projection_free, saddle; "all" runs everything.

struct CriterionResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

namespace acceptance {

// --- rates ---------------------------------------------------------------

/// f(w) = 1/2 |w - (2,0)|^2 over the unit ball: error at every T <= 1000
/// stays below 8 L D / (T+1) with L = 1, D = 4.
inline CriterionResult c01_fw_rate() {
  Vec c(2);
  c << 2.0, 0.0;
  auto f = make_quadratic(Mat::Identity(2, 2), Vec(-c));
  auto ball = std::make_shared<L2Ball>(2, 1.0);
  PresetParams pp;
  pp.f = f;
  pp.set = ball;
  pp.T = 1000;
  Vec x0(2);
  x0 << 0.0, 1.0;
  pp.x0 = x0;
  auto res = run_dynamics(preset("frank_wolfe", pp), ball.get());
  const double fstar = f->value(Vec(c / c.norm()));
  double worst = 0.0;
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    const double T = static_cast<double>(res.trace.iteration(i));
    const double err = res.trace.value(i, "f_value") - fstar;
    worst = std::max(worst, err / (8.0 * 4.0 / (T + 1.0)));
  }
  return {"rates", "c01_fw_rate", worst <= 1.0 + 1e-9, worst, 1.0, 1e-9,
          "max_T err(T) * (T+1) / (8 L D), L=1, D=4"};
}

/// Six presets reproduce their classical iterate sequences on ten seeded
/// quadratics, max deviation <= 1e-8 over T = 200.
inline std::vector<CriterionResult> c02_equivalence() {
  const int T = 200;
  std::vector<CriterionResult> rows;
  const std::vector<std::string> names{"frank_wolfe",    "nesterov_1mem", "nesterov_infmem",
                                       "nesterov_first", "heavy_ball",    "accel_prox"};
  for (const auto& name : names) {
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
      Rng rng(Rng::derive(s, "equiv"));
      const int d = 3 + rng.next_int(5);
      Mat B = rng.gaussian_matrix(d, d);
      Mat G = B.transpose() * B + Mat::Identity(d, d);
      // Minimizer placed outside the radius-2 ball: LMO-based runs keep a
      // nonvanishing gradient, so the iterate coupling is numerically stable.
      Vec target = 3.0 * rng.sphere_vector(d);
      auto f = make_quadratic(G, Vec(-G * target));
      PresetParams pp;
      pp.f = f;
      pp.T = T;
      Vec x0 = 0.5 * rng.sphere_vector(d);
      const bool constrained = (name == "frank_wolfe" || name == "nesterov_1mem" || name == "nesterov_infmem");
      std::shared_ptr<L2Ball> ball;
      if (constrained) {
        ball = std::make_shared<L2Ball>(d, 2.0);
        pp.set = ball;
      }
      std::shared_ptr<L1Norm> psi;
      if (name == "accel_prox") {
        psi = std::make_shared<L1Norm>(0.05);
        pp.psi = psi;
      }
      pp.x0 = x0;
      auto res = run_dynamics(preset(name, pp), ball.get());
      auto ref = reference_iterative(name, pp, T);
      for (int t = 0; t < T; ++t) worst = std::max(worst, (ref.iterates[t] - res.xbars[t]).norm());
    }
    rows.push_back({"equivalence", "c02_equivalence_" + name, worst <= 1e-8, worst, 1e-8, 0.0,
                    "max_t |w_t(iterative) - xbar_t(game)| over 10 seeded quadratics"});
  }
  return rows;
}

/// Accelerated rate: kappa = 100 quadratic, gamma = 1/(4L) so C = 4:
/// sup_{T<=500} T^2 (f(xbar_T) - f*) <= 8 L D with D = 1/2 |x0 - x*|^2.
inline CriterionResult c03_nesterov_rate() {
  const int d = 6;
  const double kappa = 100.0;
  auto f = experiments::seeded_quadratic(d, kappa, 5);
  Vec wstar = f->minimizer();
  const double fstar = f->value(wstar);
  PresetParams pp;
  pp.f = f;
  pp.T = 500;
  pp.x0 = Vec::Zero(d);
  auto res = run_dynamics(preset("nesterov_first", pp), nullptr);
  double sup = 0.0;
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    const double T = static_cast<double>(res.trace.iteration(i));
    sup = std::max(sup, T * T * (res.trace.value(i, "f_value") - fstar));
  }
  const double bound = 2.0 * 4.0 * kappa * 0.5 * (pp.x0 - wstar).squaredNorm();
  return {"rates", "c03_nesterov_rate", sup <= bound * 1.01, sup, bound, 0.01,
          "sup_T T^2 err vs 2*C*L*D, C=4, kappa=100"};
}

/// Linear-rate accelerated method: kappa = 25 quadratic, L_phi = 1; error at
/// T = 200 below C (1 - 1/(2 sqrt2 sqrt kappa))^T with C fitted at T = 1, and
/// the error strictly decreasing across T = 50, 100, 200.
inline CriterionResult c04_accel_linear() {
  const int d = 6;
  const double kappa = 25.0;
  auto f = experiments::seeded_quadratic(d, kappa, 11);
  Vec wstar = f->minimizer();
  const double fstar = f->value(wstar);
  PresetParams pp;
  pp.f = f;
  pp.T = 200;
  pp.x0 = Vec::Zero(d);
  auto res = run_dynamics(preset("accel_linear", pp), nullptr);
  const double rate = 1.0 - 1.0 / (2.0 * std::sqrt(2.0) * std::sqrt(kappa));
  auto err = [&](int T) { return res.trace.value(T - 1, "f_value") - fstar; };
  const double C = err(1) / rate;
  const double bound = C * std::pow(rate, 200);
  const bool mono = err(200) < err(100) && err(100) < err(50);
  const bool pass = err(200) <= bound * 1.01 && mono;
  return {"rates", "c04_accel_linear", pass, err(200), bound, 0.01,
          std::string("err(200) vs fitted envelope; strict decrease ") + (mono ? "holds" : "fails")};
}

/// Weighted-regret lemmas on 100 random sequences each: best response and
/// prescient leader never above zero; regularized prescient leader below
/// (R(z*) - R(z0)) / eta on linear losses.
inline CriterionResult c08_regret_lemmas() {
  Rng rng(404);
  double worst_br = -1e300, worst_ftlp = -1e300, worst_ftrl_excess = -1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + rng.next_int(4);
    const int T = 30;
    L2Ball ball(d, 1.5);

    // strongly convex sequences for BestResp / FTL+
    std::vector<std::pair<double, Loss>> hist;
    for (int t = 0; t < T; ++t) {
      const double alpha = 0.25 + rng.next_double();
      IsoQuadLoss q{0.5 + rng.next_double(), rng.gaussian_vector(d), 0.3 * rng.gaussian_vector(d)};
      hist.emplace_back(alpha, Loss(q));
    }
    BestResp br(&ball);
    FtlPlus ftlp(&ball);
    for (auto& [alpha, loss] : hist) {
      br.act(alpha, &loss);
      br.observe(alpha, loss);
      ftlp.act(alpha, &loss);
      ftlp.observe(alpha, loss);
    }
    worst_br = std::max(worst_br, br.weighted_regret(br.loss_sum_argmin()));
    worst_ftlp = std::max(worst_ftlp, ftlp.weighted_regret(ftlp.loss_sum_argmin()));

    // linear sequences for FTRL+
    const double eta = 0.2 + rng.next_double();
    Ftrl ftrlp(&ball, eta, Vec::Zero(d), /*prescient=*/true);
    for (int t = 0; t < T; ++t) {
      const double alpha = 0.25 + rng.next_double();
      Loss loss(LinearLoss{rng.gaussian_vector(d)});
      ftrlp.act(alpha, &loss);
      ftrlp.observe(alpha, loss);
    }
    Vec zstar = ftrlp.loss_sum_argmin();
    const double reg = ftrlp.weighted_regret(zstar);
    const double cap = (0.5 * zstar.squaredNorm() - 0.0) / eta;  // R(z*) - R(0)
    worst_ftrl_excess = std::max(worst_ftrl_excess, reg - cap);
  }
  const bool pass = worst_br <= 1e-9 && worst_ftlp <= 1e-9 && worst_ftrl_excess <= 1e-9;
  std::ostringstream os;
  os << "worst BestResp " << worst_br << ", FTL+ " << worst_ftlp << ", FTRL+ excess " << worst_ftrl_excess;
  return {"rates", "c08_regret_lemmas", pass, std::max({worst_br, worst_ftlp, worst_ftrl_excess}), 0.0, 1e-9,
          os.str()};
}

/// Byte-identical CSVs when a seeded run repeats.
inline CriterionResult c16_determinism() {
  namespace fs = std::filesystem;
  auto read = [](const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  };
  fs::path base = fs::temp_directory_path() / "fgopt_determinism";
  bool pass = true;
  std::string detail;
  for (const auto& [name, params] :
       std::vector<std::pair<std::string, json>>{{"fw_quadratic_ball", {{"T", 1000}}},
                                                 {"saddle_beta_sweep", {{"T", 50000}, {"betas", {0.0, 0.9}}}},
                                                 {"nuclear_completion", {{"T", 40}}}}) {
    ExperimentSpec a{name, params, 42, (base / (name + "_a")).string()};
    ExperimentSpec b{name, params, 42, (base / (name + "_b")).string()};
    auto fa = run_experiment(a);
    auto fb = run_experiment(b);
    if (fa.size() != fb.size()) pass = false;
    for (std::size_t i = 0; i < std::min(fa.size(), fb.size()); ++i) {
      if (fs::path(fa[i]).extension() != ".csv") continue;
      if (read(fa[i]) != read(fb[i])) {
        pass = false;
        detail += name + " differs; ";
      }
    }
  }
  fs::remove_all(base);
  if (detail.empty()) detail = "fw_quadratic_ball, saddle_beta_sweep, nuclear_completion re-runs byte-identical";
  return {"rates", "c16_determinism", pass, pass ? 0.0 : 1.0, 0.0, 0.0, detail};
}

// --- momentum --------------------------------------------------------------

/// Tuned heavy ball on quadratics: stacked residual under the
/// (1 - 1/(2 sqrt kappa))^t 4 sqrt(kappa) envelope for t <= 5000, slack
/// 1 + 1e-6, with rows below 1e-12 of the initial residual treated as the
/// double-precision floor.
inline CriterionResult c05_polyak_quadratic() {
  double worst = 0.0;
  bool pass = true;
  for (double kappa : {10.0, 100.0, 1000.0}) {
    const int d = 5;
    auto f = experiments::seeded_quadratic(d, kappa, 17);
    Vec wstar = f->minimizer();
    auto cfg = tuned_params(MomentumProblem::quadratic, 1.0, kappa);
    cfg.w0 = Vec::Zero(d);
    auto tr = heavy_ball_run(cfg, *f, 5000, wstar);
    const double init = std::sqrt(2.0) * wstar.norm();
    const double sb = 1.0 - 0.5 / std::sqrt(kappa);
    double pw = 1.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      pw *= sb;
      const double bound = pw * 4.0 * std::sqrt(kappa) * init;
      const double r = tr.value(i, "stacked_residual");
      if (r <= 1e-12 * init) continue;  // machine floor
      worst = std::max(worst, r / bound);
      if (r > bound * (1.0 + 1e-6)) pass = false;
    }
  }
  return {"momentum", "c05_polyak_quadratic", pass, worst, 1.0, 1e-6,
          "max residual/envelope over kappa in {10,100,1000}, t <= 5000"};
}

/// kappa = 400: tuned momentum needs at most a fifth of the iterations plain
/// gradient descent (eta = 1/L) needs to reach residual 1e-6.
inline CriterionResult c06_momentum_speedup() {
  const double kappa = 400.0;
  const int d = 5;
  auto f = experiments::seeded_quadratic(d, kappa, 23);
  Vec wstar = f->minimizer();
  Vec w0 = Vec::Zero(d);
  const double target = 1e-6 * (w0 - wstar).norm();
  int t_gd = -1, t_hb = -1;
  {
    Vec w = w0;
    for (int t = 1; t <= 3000000 && t_gd < 0; ++t) {
      w -= (1.0 / kappa) * f->gradient(w);
      if ((w - wstar).norm() <= target) t_gd = t;
    }
  }
  {
    auto cfg = tuned_params(MomentumProblem::quadratic, 1.0, kappa);
    Vec w = w0, wp = w0;
    for (int t = 1; t <= 3000000 && t_hb < 0; ++t) {
      Vec wn = w - cfg.eta * f->gradient(w) + cfg.beta * (w - wp);
      wp = w;
      w = wn;
      if ((w - wstar).norm() <= target) t_hb = t;
    }
  }
  const double ratio = static_cast<double>(t_hb) / t_gd;
  return {"momentum", "c06_momentum_speedup", t_hb > 0 && t_gd > 0 && ratio <= 0.2, ratio, 0.2, 0.0,
          "momentum iterations " + std::to_string(t_hb) + " vs GD " + std::to_string(t_gd)};
}

/// Matrix-power bound: zero violations of the certified power bound on 100
/// random PSD instances (the certified constant is sqrt(2) * C0; see the
/// akv_certified_constant notes), plus the reported C0 values: 1.8257 at
/// kappa = 1 with beta = 0.25, and C0 <= 4 sqrt(kappa) at the tuned pair.
inline CriterionResult c07_matrix_power() {
  Rng rng(9);
  int fails = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.next_int(7);
    Mat B = rng.gaussian_matrix(n, n);
    Mat H = B.transpose() * B + 0.05 * Mat::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff(), lmin = es.eigenvalues().minCoeff();
    const double eta = 1.0 / lmax;
    const double thr = momentum_admissibility_threshold(eta * lmin, eta * lmax);
    const double beta = thr + (1.0 - thr) * (0.05 + 0.9 * rng.next_double());
    Vec v0 = rng.gaussian_vector(2 * n);
    auto r = akv_bound_check(H, v0, eta, beta, 200);
    worst = std::max(worst, r.worst_ratio);
    if (!r.holds) ++fails;
  }
  const double c0_unit = c0_constant(0.25, 1.0, 1.0);
  bool c0_ok = std::abs(c0_unit - 1.8257) <= 1e-3;
  for (double kappa : {1.0, 10.0, 100.0}) {
    const double beta = std::pow(1.0 - 0.5 / std::sqrt(kappa), 2);
    if (c0_constant(beta, 1.0 / kappa, 1.0) > 4.0 * std::sqrt(kappa)) c0_ok = false;
  }
  std::ostringstream os;
  os << fails << " violations of the certified bound; C0(kappa=1) = " << c0_unit;
  return {"momentum", "c07_matrix_power", fails == 0 && c0_ok, worst, 1.0, 0.0, os.str()};
}

/// Deep linear net at desk scale: residual under the
/// (1 - 1/(4 sqrt kappa))^t 8 sqrt(kappa) envelope for t <= 500; momentum
/// residual strictly below gradient descent at t = 200.
inline CriterionResult c12_deep_linear() {
  json params = {{"T", 500}, {"dim", 4}, {"dim_out", 4}, {"width", 16}, {"depth", 10}, {"samples", 5}};
  const std::uint64_t seed = 55;
  // recompute kappa exactly as the experiment does
  Rng rng(Rng::derive(seed, "dln-data"));
  Mat X = rng.gaussian_matrix(4, 5);
  Eigen::JacobiSVD<Mat> svd(X);
  const double smax = svd.singularValues().maxCoeff(), smin = svd.singularValues().minCoeff();
  const double kappa = (smax * smax) / (smin * smin);

  auto traces = experiments::deep_linear(params, seed);
  const Trace& hb = traces[0].trace;
  const Trace& gd = traces[1].trace;
  const double rate = 1.0 - 0.25 / std::sqrt(kappa);
  double worst = 0.0;
  bool pass = true;
  double pw = 1.0;
  for (std::size_t i = 0; i < hb.size(); ++i) {
    pw *= rate;
    const double bound = pw * 8.0 * std::sqrt(kappa);
    const double r = hb.value(i, "stacked_relative");
    if (r <= 1e-12) continue;
    worst = std::max(worst, r / bound);
    if (r > bound * (1.0 + 1e-6)) pass = false;
  }
  const bool faster = hb.value(199, "residual") < gd.value(199, "residual");
  std::ostringstream os;
  os << "kappa = " << kappa << "; momentum residual(200) " << hb.value(199, "residual") << " vs GD "
     << gd.value(199, "residual");
  return {"momentum", "c12_deep_linear", pass && faster, worst, 1.0, 1e-6, os.str()};
}

/// Wide ReLU net (n=5, m=1000, d=10): momentum loss strictly below gradient
/// descent at iteration 200; activation-pattern changes below 2%.
inline CriterionResult c13_relu_ntk() {
  json params = {{"T", 200}, {"samples", 5}, {"dim", 10}, {"width", 1000}};
  auto traces = experiments::relu_ntk(params, 8);
  const Trace& hb = traces[0].trace;
  const Trace& gd = traces[1].trace;
  const double lh = hb.back("loss"), lg = gd.back("loss");
  const double ph = hb.back("pattern_change"), pg = gd.back("pattern_change");
  const bool pass = lh < lg && ph < 0.02 && pg < 0.02;
  std::ostringstream os;
  os << "loss(200) momentum " << lh << " vs GD " << lg << "; pattern changes " << ph * 100 << "% / " << pg * 100
     << "%";
  return {"momentum", "c13_relu_ntk", pass, ph, 0.02, 0.0, os.str()};
}

// --- projection-free ---------------------------------------------------------

/// Gauge pairing rate: quadratic over the unit ball, eta = lambda/(4L):
/// sup_{T<=500} T^2 err <= 2 C L gauge(x*)^2 / lambda, C = 4, slack 1.05.
inline CriterionResult c09_gauge_rate() {
  const int d = 2;
  Vec c(2);
  c << 0.3, 0.2;
  auto f = make_quadratic(Mat::Identity(d, d), Vec(-c));
  L2Ball ball(d, 1.0);
  auto r = gauge_fw(*f, ball, 500);
  const double fstar = f->value(c);
  const double lambda = ball.gauge_sq_strong_convexity();
  const double bound = 2.0 * 4.0 * 1.0 * std::pow(ball.gauge(c), 2) / lambda;
  double sup = 0.0;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const double T = static_cast<double>(r.trace.iteration(i));
    sup = std::max(sup, T * T * (r.trace.value(i, "f_value") - fstar));
  }
  return {"projection_free", "c09_gauge_rate", sup <= bound * 1.05, sup, bound, 0.05,
          "sup_T T^2 err vs 2 C L gauge(x*)^2 / lambda"};
}

/// Boundary pairing on a non-smooth objective over a strongly convex set:
/// error at T = 2000 within 10x of the fitted M log T / (lambda L_T T)
/// envelope; every iterate on the boundary (gauge 1 +- 1e-6).
inline CriterionResult c10_boundary_fw() {
  const int d = 3;
  Rng rng(Rng::derive(31, "boundary"));
  Vec c = 2.0 * rng.sphere_vector(d);
  auto f = std::make_shared<SubgradientObjective>(
      d, [c](const Vec& w) { return (w - c).norm(); },
      [c](const Vec& w) {
        Vec g = w - c;
        const double n = g.norm();
        return n > 0.0 ? Vec(g / n) : Vec(Vec::Zero(w.size()));
      },
      1.0);
  L2Ball ball(d, 1.0);
  auto r = boundary_fw(*f, ball, 2000);
  const double fstar = c.norm() - 1.0;
  const double lambda = ball.set_strong_convexity();
  const double M = 1.0;

  auto envelope = [&](std::size_t i, double C) {
    const double T = static_cast<double>(r.trace.iteration(i));
    return C * M * std::log(T) / (lambda * r.trace.value(i, "theta_min") * T);
  };
  const double err100 = r.trace.value(99, "f_avg") - fstar;
  const double C = err100 / envelope(99, 1.0);
  const double err2000 = r.trace.value(1999, "f_avg") - fstar;
  const double bound = 10.0 * envelope(1999, C);

  bool on_boundary = true;
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    if (std::abs(r.trace.value(i, "gauge_x") - 1.0) > 1e-6) on_boundary = false;
  std::ostringstream os;
  os << "err(2000) vs 10x fitted envelope; boundary " << (on_boundary ? "holds" : "violated");
  return {"projection_free", "c10_boundary_fw", err2000 <= bound && on_boundary, err2000, bound, 0.0, os.str()};
}

/// Randomized nuclear-ball solver on a 10x10 rank-1 completion target:
/// objective drops below 1e-2 of its initial value in T = 300; output nuclear
/// norm feasible; every averaged matrix PSD with unit trace.
inline CriterionResult c11_nuclear() {
  json params = {{"T", 300}, {"rows", 10}, {"cols", 10}, {"delta", 0.1}, {"workers", 1}};
  const std::uint64_t seed = 3;
  Rng rng(Rng::derive(seed, "nuclear-target"));
  Vec u = rng.gaussian_vector(10), v = rng.gaussian_vector(10);
  Mat target = u * v.transpose();
  const double radius = u.norm() * v.norm();
  MatrixObjective mo;
  mo.d1 = 10;
  mo.d2 = 10;
  mo.L = 1.0;
  mo.value = [target](const Mat& W) { return 0.5 * (W - target).squaredNorm(); };
  mo.gradient = [target](const Mat& W) { return Mat(W - target); };
  auto res = nuclear_run(mo, radius, 0.0, 0.1, 300, seed, 1);

  const double f_init = 0.5 * target.squaredNorm();  // start W_0 = I/d has a zero off-diagonal block
  const double f_final = res.trace.back("f_value");
  bool spectra_ok = true;
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    if (std::abs(res.trace.value(i, "trace_X") - 1.0) > 1e-9) spectra_ok = false;
    if (std::abs(res.trace.value(i, "trace_W") - 1.0) > 1e-9) spectra_ok = false;
    if (res.trace.value(i, "min_eig_X") < -1e-9) spectra_ok = false;
    if (res.trace.value(i, "min_eig_W") < -1e-9) spectra_ok = false;
  }
  NuclearBall nb(10, 10, radius);
  Vec wv = Eigen::Map<Vec>(res.W_out.data(), 100);
  const double nuc = nb.nuclear_norm(wv);
  const bool pass = f_final <= 1e-2 * f_init && nuc <= radius + 1e-6 && spectra_ok;
  std::ostringstream os;
  os << "f_T/f_0 = " << f_final / f_init << "; nuclear norm " << nuc << " <= " << radius << "; spectra "
     << (spectra_ok ? "ok" : "violated");
  return {"projection_free", "c11_nuclear", pass, f_final / f_init, 1e-2, 0.0, os.str()};
}

// --- saddle --------------------------------------------------------------------

/// Escape ordering on the toy objective: first t with f(w_t) <= -0.01 is
/// non-increasing in beta over {0, 0.3, 0.5, 0.7, 0.9}, strictly earlier at
/// beta = 0.9 than beta = 0.
inline CriterionResult c14_saddle_escape() {
  json params = {{"T", 4000000}, {"samples", 10}, {"eta", 5e-5},
                 {"betas", {0.0, 0.3, 0.5, 0.7, 0.9}}, {"escape_level", -0.01}, {"stride", 1000000000}};
  auto traces = experiments::saddle_beta_sweep(params, 321);
  const Trace& summary = traces.back().trace;
  bool ordered = true;
  std::ostringstream os;
  os << "escape times:";
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < summary.size(); ++i) {
    const double t = summary.value(i, "first_escape_t");
    os << " " << t;
    if (t < 0 || t > prev) ordered = false;
    prev = t;
  }
  const double t0 = summary.value(0, "first_escape_t");
  const double t9 = summary.value(summary.size() - 1, "first_escape_t");
  const bool pass = ordered && t9 < t0 && t9 >= 0;
  return {"saddle", "c14_saddle_escape", pass, t9, t0, 0.0, os.str()};
}

/// Phase retrieval: beta = 0.9 reaches relative distance < 0.1 within 1e5
/// iterations and crosses 0.5 before beta = 0 does.
inline CriterionResult c15_phase_retrieval() {
  json params = {{"T", 100000}, {"samples", 200}, {"dim", 10}, {"eta", 5e-4}, {"betas", {0.0, 0.9}}, {"stride", 1}};
  auto traces = experiments::phase_retrieval(params, 7);
  auto first_below = [](const Trace& tr, double level) -> long long {
    for (std::size_t i = 0; i < tr.size(); ++i)
      if (tr.value(i, "rel_dist") < level) return tr.iteration(i);
    return -1;
  };
  const Trace& t0 = traces[0].trace;  // beta 0
  const Trace& t9 = traces[1].trace;  // beta 0.9
  const long long hit01 = first_below(t9, 0.1);
  const long long cross9 = first_below(t9, 0.5);
  const long long cross0 = first_below(t0, 0.5);
  const bool pass = hit01 >= 0 && cross9 >= 0 && (cross0 < 0 || cross9 < cross0);
  std::ostringstream os;
  os << "beta=0.9 dist<0.1 at t=" << hit01 << ", crosses 0.5 at " << cross9 << "; beta=0 crosses at "
     << (cross0 < 0 ? std::string("never (within 1e5)") : std::to_string(cross0));
  return {"saddle", "c15_phase_retrieval", pass, static_cast<double>(hit01), 1e5, 0.0, os.str()};
}

}  // namespace acceptance

inline std::vector<CriterionResult> run_acceptance_suite(const std::string& suite) {
  using namespace acceptance;
  std::vector<CriterionResult> rows;
  auto want = [&](const std::string& s) { return suite == "all" || suite == s; };
  if (suite != "all" && suite != "rates" && suite != "equivalence" && suite != "momentum" &&
      suite != "projection_free" && suite != "saddle")
    throw std::invalid_argument("unknown suite '" + suite +
                                "'; valid: rates, equivalence, momentum, projection_free, saddle, all");
  if (want("rates")) {
    rows.push_back(c01_fw_rate());
    rows.push_back(c03_nesterov_rate());
    rows.push_back(c04_accel_linear());
    rows.push_back(c08_regret_lemmas());
    rows.push_back(c16_determinism());
  }
  if (want("equivalence")) {
    auto eq = c02_equivalence();
    rows.insert(rows.end(), eq.begin(), eq.end());
  }
  if (want("momentum")) {
    rows.push_back(c05_polyak_quadratic());
    rows.push_back(c06_momentum_speedup());
    rows.push_back(c07_matrix_power());
    rows.push_back(c12_deep_linear());
    rows.push_back(c13_relu_ntk());
  }
  if (want("projection_free")) {
    rows.push_back(c09_gauge_rate());
    rows.push_back(c10_boundary_fw());
    rows.push_back(c11_nuclear());
  }
  if (want("saddle")) {
    rows.push_back(c14_saddle_escape());
    rows.push_back(c15_phase_retrieval());
  }
  return rows;
}

inline json report_json(const std::vector<CriterionResult>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"suite", r.suite},
                   {"name", r.name},
                   {"pass", r.pass},
                   {"measured", r.measured},
                   {"bound", r.bound},
                   {"tolerance", r.tolerance},
                   {"detail", r.detail}});
  }
  return out;
}

}  // namespace fgopt
