#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fgopt/bregman.hpp"
#include "fgopt/objective.hpp"
#include "fgopt/prox.hpp"
#include "fgopt/rng.hpp"
#include "fgopt/sets.hpp"
#include "fgopt/trace.hpp"
#include "fgopt/types.hpp"
#include "fgopt/weights.hpp"

namespace fgopt {

// Two-player zero-sum dynamics over the conjugate payoff
//   g(x, y) = <x, y> - f*(y)                     (plain)
//   g(x, y) = <x, y> - f*(y) + psi(x)            (composite)
//   g(x, y) = <x, y> - ft*(y) + mu phi(x),       (strongly convex split)
// where ft = f - mu phi. Each round the y-player proposes a gradient-space
// point and the x-player answers in the primal; alpha-weighted averages of
// both streams converge to an approximate equilibrium, and the averaged
// x-iterate approximately minimizes f. The conjugate f* is never
// materialized: every y-update is evaluated as grad f at a weighted average
// of past x-iterates, and f* values needed for regret accounting come from
// the conjugacy identity f*(grad f(z)) = <z, grad f(z)> - f(z).

enum class PayoffKind { fenchel, composite, strongly_convex_split };

struct Payoff {
  PayoffKind kind = PayoffKind::fenchel;
  std::shared_ptr<const Objective> f;
  std::shared_ptr<const ProxFunction> psi;      // composite only
  double mu = 0.0;                              // split only
  std::shared_ptr<const BregmanGeometry> phi;   // split only
};

// --- learner pairings -------------------------------------------------------

struct YFtl {};            // y_t = grad f(xbar_{t-1}); y_1 = grad f(x0)
struct YOptimisticFtl {};  // y_t = grad f(xtilde_t), hint = previous round's loss
struct YFtpl {             // Monte-Carlo smoothed FTL
  double noise_scale = 0.1;
  int n_samples = 64;
};
struct YBestResp {};     // swapped ordering: y_t = subgradient at x_t
struct YIncremental {};  // finite-sum aggregate gradient, cyclic refresh

using YStrategy = std::variant<YFtl, YOptimisticFtl, YFtpl, YBestResp, YIncremental>;

struct XBestResp {};
struct XOmdPlus {
  double gamma = 0.0;
  std::shared_ptr<const BregmanGeometry> phi;  // defaults to squared Euclidean
};
struct XFtrlPlus {
  double eta = 0.0;  // regularizer (1/eta) * 1/2 |x - x0|^2
};
struct XFtrlPlusSplit {};  // regularized by mu * (alpha0 + A_t) * phi(x)
struct XGaugeFtrlPlus {
  double eta = 0.0;  // regularizer (1/eta) * gauge^2
};
struct XFtl {};  // swapped ordering only

using XStrategy = std::variant<XBestResp, XOmdPlus, XFtrlPlus, XFtrlPlusSplit, XGaugeFtrlPlus, XFtl>;

enum class Ordering { y_first, x_first };

struct GameConfig {
  Payoff payoff;
  YStrategy y_strategy;
  XStrategy x_strategy;
  WeightSchedule weights = WeightSchedule::linear();
  Ordering ordering = Ordering::y_first;
  int T = 100;
  Vec x0;               // start point (w0 = v0); must be feasible when a set is given
  double alpha0 = 1.0;  // weight of the split regularizer round
  std::optional<Vec> x_star;  // known optimum, enables gap/distance reporting
  std::uint64_t seed = 0;
};

struct GameResult {
  Vec x_bar;
  Vec y_bar;
  Trace trace;
  std::vector<Vec> xs;     // x_1..T
  std::vector<Vec> xbars;  // xbar_1..T
  WeightSchedule weights = WeightSchedule::uniform();  // realized schedule
  double x_regret = std::numeric_limits<double>::quiet_NaN();
  double y_regret = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline const Objective& payoff_f(const Payoff& p) {
  if (!p.f) throw std::invalid_argument("payoff carries no objective");
  return *p.f;
}

/// Gradient of the effective smooth part (f, or f - mu*phi for the split payoff).
inline Vec eff_gradient(const Payoff& p, const Vec& z) {
  Vec g = payoff_f(p).gradient(z);
  if (p.kind == PayoffKind::strongly_convex_split) g -= p.mu * p.phi->grad_phi(z);
  return g;
}

inline double eff_value(const Payoff& p, const Vec& z) {
  double v = payoff_f(p).value(z);
  if (p.kind == PayoffKind::strongly_convex_split) v -= p.mu * p.phi->phi(z);
  return v;
}

/// Extra x-loss term beyond <x, y>: psi(x) or mu*phi(x).
inline double x_extra(const Payoff& p, const Vec& x) {
  switch (p.kind) {
    case PayoffKind::composite: return p.psi ? p.psi->value(x) : 0.0;
    case PayoffKind::strongly_convex_split: return p.mu * p.phi->phi(x);
    default: return 0.0;
  }
}

inline Vec project_or_pass(const FeasibleSet* set, Vec z) {
  if (set && !set->contains(z)) return set->project(z);
  return z;
}

}  // namespace detail

/// Protocol loop. `set` may be null for unconstrained x-updates (BestResp and
/// gauge strategies then reject). Throws with the iteration index if an
/// iterate turns non-finite.
inline GameResult run_dynamics(const GameConfig& config, const FeasibleSet* set) {
  using namespace detail;
  const Payoff& payoff = config.payoff;
  const Objective& f = payoff_f(payoff);
  const int d = f.dim();
  if (config.x0.size() != d) throw std::invalid_argument("run_dynamics: start point has wrong dimension");
  if (set && !set->contains(config.x0, 1e-7)) throw std::invalid_argument("run_dynamics: start point infeasible");
  if (payoff.kind == PayoffKind::strongly_convex_split) {
    if (!payoff.phi) throw std::invalid_argument("split payoff needs a distance generating function");
    if (payoff.mu > f.smoothness() && f.smoothness() > 0.0)
      throw std::invalid_argument("split payoff requires mu <= L");
  }

  WeightSchedule weights = config.weights;
  const bool adaptive = weights.is_adaptive();
  if (adaptive && !(std::holds_alternative<XBestResp>(config.x_strategy) &&
                    std::holds_alternative<YFtl>(config.y_strategy)))
    throw std::invalid_argument("adaptive weights pair only with FTL / BestResp");

  if (config.ordering == Ordering::x_first &&
      !(std::holds_alternative<XFtl>(config.x_strategy) && std::holds_alternative<YBestResp>(config.y_strategy)))
    throw std::invalid_argument("swapped ordering pairs only FTL (x) with BestResp (y)");

  // Incremental-gradient bookkeeping.
  const FiniteSumObjective* fsum = dynamic_cast<const FiniteSumObjective*>(&f);
  std::vector<Vec> comp_grads;
  Vec gsum;
  if (std::holds_alternative<YIncremental>(config.y_strategy)) {
    if (!fsum) throw std::invalid_argument("incremental pairing needs a finite-sum objective");
    comp_grads.resize(fsum->num_components());
    gsum = Vec::Zero(d);
    for (int i = 0; i < fsum->num_components(); ++i) {
      comp_grads[i] = fsum->component_gradient(config.x0, i) / fsum->num_components();
      gsum += comp_grads[i];
    }
  }

  // Witness-based conjugate accounting: S1 = sum_t alpha_t (ft*(y_t) - <x_t, y_t>).
  bool have_witnesses = !std::holds_alternative<YFtpl>(config.y_strategy) &&
                        !std::holds_alternative<YIncremental>(config.y_strategy);
  const bool report_gap = have_witnesses && config.x_star.has_value();
  const bool report_dist = config.x_star.has_value();

  std::vector<std::string> cols{"f_value", "grad_norm"};
  if (report_gap) cols.push_back("gap_est");
  if (report_dist) cols.push_back("dist_opt");
  if (adaptive) {
    cols.push_back("alpha");
    cols.push_back("nu_min_grad");
  }
  Trace trace(cols);
  trace.seed = config.seed;

  GameResult res;
  Vec x_prev = config.x0;
  Vec sum_ax = Vec::Zero(d), sum_ay = Vec::Zero(d);
  double A = 0.0;
  Vec xbar = config.x0, ybar = Vec::Zero(d);
  double S1 = 0.0;  // y-player conjugate sum
  double S2 = 0.0;  // x-player realized loss sum
  double x_extra_at_star = config.x_star ? x_extra(payoff, *config.x_star) : 0.0;
  double nu_min = std::numeric_limits<double>::infinity();

  for (int t = 1; t <= config.T; ++t) {
    double alpha = adaptive ? std::numeric_limits<double>::quiet_NaN() : weights.alpha(t);
    const double A_prev = A;

    // ---- y-player ----
    Vec y_t, witness;
    bool has_witness = true;
    std::visit(
        [&](const auto& ys) {
          using T = std::decay_t<decltype(ys)>;
          if constexpr (std::is_same_v<T, YFtl>) {
            witness = (t == 1) ? config.x0 : xbar;
            y_t = eff_gradient(payoff, witness);
          } else if constexpr (std::is_same_v<T, YOptimisticFtl>) {
            witness = (A_prev + alpha <= 0.0) ? x_prev : Vec((alpha * x_prev + sum_ax) / (A_prev + alpha));
            y_t = eff_gradient(payoff, witness);
          } else if constexpr (std::is_same_v<T, YFtpl>) {
            has_witness = false;
            if (t == 1 || ys.noise_scale == 0.0) {
              y_t = eff_gradient(payoff, t == 1 ? config.x0 : xbar);
            } else {
              Vec acc = Vec::Zero(d);
              for (int j = 0; j < ys.n_samples; ++j) {
                Rng rng(Rng::derive(config.seed, "ftpl-game", static_cast<std::uint64_t>(t) * 1000003ULL + j));
                Vec xi = rng.gaussian_vector(d);
                acc += eff_gradient(payoff, Vec(xbar - (ys.noise_scale / A_prev) * xi));
              }
              y_t = acc / ys.n_samples;
            }
          } else if constexpr (std::is_same_v<T, YIncremental>) {
            has_witness = false;
            const int n = fsum->num_components();
            const int it = (t - 1) % n;
            const Vec& w_prev = (t == 1) ? config.x0 : xbar;
            gsum -= comp_grads[it];
            comp_grads[it] = fsum->component_gradient(w_prev, it) / n;
            gsum += comp_grads[it];
            y_t = gsum;
          } else {
            // YBestResp handled in the swapped branch below.
            y_t = Vec();
          }
        },
        config.y_strategy);

    // ---- x-player ----
    Vec x_t;
    std::visit(
        [&](const auto& xs) {
          using T = std::decay_t<decltype(xs)>;
          if constexpr (std::is_same_v<T, XBestResp>) {
            if (payoff.kind == PayoffKind::composite && payoff.psi) {
              if (const auto* sq = dynamic_cast<const SquaredL2*>(payoff.psi.get())) {
                x_t = project_or_pass(set, Vec(-y_t / (2.0 * sq->weight())));
              } else {
                throw std::runtime_error("BestResp composite step needs a coercive psi");
              }
            } else {
              if (!set) throw std::runtime_error("BestResp over an unbounded set is undefined");
              x_t = set->lmo(y_t);
            }
          } else if constexpr (std::is_same_v<T, XOmdPlus>) {
            const double ga = xs.gamma * alpha;
            const bool euclid = !xs.phi || dynamic_cast<const SquaredEuclidean*>(xs.phi.get()) != nullptr;
            if (payoff.kind == PayoffKind::composite && payoff.psi) {
              if (!euclid) throw std::runtime_error("composite OMD step requires the Euclidean geometry");
              x_t = project_or_pass(set, payoff.psi->prox(Vec(x_prev - ga * y_t), ga));
            } else if (payoff.kind == PayoffKind::strongly_convex_split) {
              if (!euclid) throw std::runtime_error("split OMD step requires the Euclidean geometry");
              // argmin ga*(<x,y> + mu*phi(x)) + 1/2|x - x_prev|^2
              x_t = project_or_pass(set, Vec((x_prev - ga * y_t) / (1.0 + ga * payoff.mu)));
            } else if (euclid) {
              x_t = project_or_pass(set, Vec(x_prev - ga * y_t));
            } else {
              if (set) throw std::runtime_error("non-Euclidean mirror steps support unconstrained runs only");
              x_t = xs.phi->grad_phi_inverse(Vec(xs.phi->grad_phi(x_prev) - ga * y_t));
            }
          } else if constexpr (std::is_same_v<T, XFtrlPlus>) {
            Vec L_sum = sum_ay + alpha * y_t;
            if (payoff.kind == PayoffKind::composite && payoff.psi) {
              x_t = project_or_pass(set, payoff.psi->prox(Vec(config.x0 - xs.eta * L_sum), xs.eta * (A_prev + alpha)));
            } else {
              x_t = project_or_pass(set, Vec(config.x0 - xs.eta * L_sum));
            }
          } else if constexpr (std::is_same_v<T, XFtrlPlusSplit>) {
            // argmin <L_sum, x> + mu * (alpha0 + A_t) * phi(x), Euclidean phi
            Vec L_sum = sum_ay + alpha * y_t;
            const double scale = payoff.mu * (config.alpha0 + A_prev + alpha);
            x_t = project_or_pass(set, Vec(-L_sum / scale));
          } else if constexpr (std::is_same_v<T, XGaugeFtrlPlus>) {
            if (!set || !set->has_gauge()) throw std::runtime_error("gauge strategy needs a set exposing a gauge");
            Vec L_sum = sum_ay + alpha * y_t;
            Vec z_star = set->lmo(L_sum);
            const double rho = std::clamp(-(xs.eta / 2.0) * L_sum.dot(z_star), 0.0, 1.0);
            x_t = rho * z_star;
          } else {
            x_t = Vec();  // XFtl handled in the swapped branch
          }
        },
        config.x_strategy);

    // ---- swapped ordering (x plays FTL over past linear losses, y answers) ----
    if (config.ordering == Ordering::x_first) {
      if (t == 1) {
        x_t = config.x0;
      } else {
        if (!set) throw std::runtime_error("swapped ordering needs a feasible set");
        x_t = set->lmo(sum_ay);
      }
      witness = x_t;
      y_t = eff_gradient(payoff, x_t);
      has_witness = true;
    }

    if (!x_t.allFinite() || !y_t.allFinite())
      throw std::runtime_error("run_dynamics: non-finite iterate at round " + std::to_string(t));

    if (adaptive) {
      const Vec g = x_t - ((t == 1) ? config.x0 : xbar);  // grad of the y-player loss at y_t
      const double n2 = g.squaredNorm();
      alpha = (g.norm() < 1e-6) ? 1e12 : 1.0 / n2;
      nu_min = std::min(nu_min, g.norm());
      weights.push(alpha);
    }

    // ---- averaging and accounting ----
    A += alpha;
    sum_ax += alpha * x_t;
    sum_ay += alpha * y_t;
    xbar = sum_ax / A;
    ybar = sum_ay / A;
    x_prev = x_t;

    if (has_witness) {
      const double conj = witness.dot(y_t) - eff_value(payoff, witness);  // ft*(y_t)
      S1 += alpha * (conj - x_t.dot(y_t));
    }
    S2 += alpha * (x_t.dot(y_t) + x_extra(payoff, x_t));

    res.xs.push_back(x_t);
    res.xbars.push_back(xbar);

    std::vector<double> row;
    const double fval = f.value(xbar) + (payoff.kind == PayoffKind::composite && payoff.psi ? payoff.psi->value(xbar) : 0.0);
    row.push_back(fval);
    row.push_back(f.gradient(xbar).norm());
    if (report_gap) {
      const double reg_y = S1 + A * eff_value(payoff, xbar);
      const double reg_x = S2 - config.x_star->dot(sum_ay) - A * x_extra_at_star;
      row.push_back((reg_x + reg_y) / A);
      res.x_regret = reg_x;
      res.y_regret = reg_y;
    }
    if (report_dist) row.push_back((xbar - *config.x_star).norm());
    if (adaptive) {
      row.push_back(alpha);
      row.push_back(nu_min);
    }
    trace.add_row(t, row);
  }

  res.x_bar = xbar;
  res.y_bar = ybar;
  res.trace = std::move(trace);
  res.weights = std::move(weights);
  return res;
}

/// sup_y g(xbar, y) - inf_{x in set} g(x, ybar) >= 0. Exact by conjugacy on
/// the sup side: sup_y g(xbar, y) = f(xbar).
inline double equilibrium_gap(const Vec& x_bar, const Vec& y_bar, const Objective& f, const FeasibleSet& set) {
  const double upper = f.value(x_bar);
  const double lower = set.lmo(y_bar).dot(y_bar) - f.conjugate(y_bar);
  return std::max(0.0, upper - lower);
}

// --- preset catalog ----------------------------------------------------------

struct PresetParams {
  std::shared_ptr<const Objective> f;
  std::shared_ptr<const FeasibleSet> set;  // required by LMO-based presets
  Vec x0;                                  // empty: preset default
  int T = 100;
  double L = 0.0;   // defaults to f->smoothness()
  double mu = 0.0;  // defaults to f->strong_convexity()
  double L_phi = 1.0;
  std::shared_ptr<const ProxFunction> psi;  // accel_prox
  double noise_scale = 0.05;
  int n_samples = 64;
  double eta = 0.0;  // gauge_fw override; 0 picks lambda/(4L)
  std::optional<Vec> x_star;
  std::uint64_t seed = 0;
};

inline std::vector<std::string> preset_names() {
  return {"frank_wolfe",   "fw_uniform",    "fw_linear_rate", "smoothed_fw", "incremental_fw",
          "nesterov_1mem", "nesterov_infmem", "nesterov_first", "heavy_ball",  "accel_prox",
          "accel_linear",  "boundary_fw",   "gauge_fw"};
}

inline GameConfig preset(const std::string& name, const PresetParams& p) {
  if (!p.f) throw std::invalid_argument("preset: objective required");
  const double L = p.L > 0.0 ? p.L : p.f->smoothness();
  auto euclid = std::make_shared<SquaredEuclidean>();

  GameConfig cfg;
  cfg.payoff.kind = PayoffKind::fenchel;
  cfg.payoff.f = p.f;
  cfg.T = p.T;
  cfg.seed = p.seed;
  cfg.x_star = p.x_star;

  auto default_start = [&]() -> Vec {
    if (p.x0.size()) return p.x0;
    if (p.set) return p.set->lmo(p.f->gradient(p.set->canonical_point()));
    return Vec::Zero(p.f->dim());
  };
  cfg.x0 = default_start();

  auto need_L = [&]() {
    if (!(L > 0.0)) throw std::invalid_argument("preset '" + name + "' needs a smoothness constant");
  };

  if (name == "frank_wolfe" || name == "fw_uniform" || name == "fw_linear_rate" || name == "smoothed_fw") {
    if (!p.set) throw std::invalid_argument("preset '" + name + "' needs a feasible set");
    cfg.y_strategy = YFtl{};
    cfg.x_strategy = XBestResp{};
    if (name == "frank_wolfe") cfg.weights = WeightSchedule::linear();
    if (name == "fw_uniform") cfg.weights = WeightSchedule::uniform();
    if (name == "fw_linear_rate") cfg.weights = WeightSchedule::adaptive_inverse_grad_sq();
    if (name == "smoothed_fw") {
      cfg.weights = WeightSchedule::uniform();
      cfg.y_strategy = YFtpl{p.noise_scale, p.n_samples};
    }
  } else if (name == "incremental_fw") {
    if (!p.set) throw std::invalid_argument("preset 'incremental_fw' needs a feasible set");
    cfg.y_strategy = YIncremental{};
    cfg.x_strategy = XBestResp{};
    cfg.weights = WeightSchedule::uniform();
  } else if (name == "nesterov_1mem" || name == "nesterov_first" || name == "accel_prox") {
    need_L();
    cfg.y_strategy = YOptimisticFtl{};
    cfg.x_strategy = XOmdPlus{1.0 / (4.0 * L), euclid};
    cfg.weights = WeightSchedule::linear();
    if (name == "accel_prox") {
      if (!p.psi) throw std::invalid_argument("preset 'accel_prox' needs psi");
      cfg.payoff.kind = PayoffKind::composite;
      cfg.payoff.psi = p.psi;
    }
  } else if (name == "nesterov_infmem") {
    need_L();
    cfg.y_strategy = YOptimisticFtl{};
    cfg.x_strategy = XFtrlPlus{1.0 / (4.0 * L)};
    cfg.weights = WeightSchedule::linear();
  } else if (name == "heavy_ball") {
    need_L();
    cfg.y_strategy = YFtl{};
    cfg.x_strategy = XOmdPlus{1.0 / (4.0 * L), euclid};
    cfg.weights = WeightSchedule::linear();
  } else if (name == "accel_linear") {
    need_L();
    const double mu = p.mu > 0.0 ? p.mu : p.f->strong_convexity();
    if (!(mu > 0.0)) throw std::invalid_argument("preset 'accel_linear' needs strong convexity");
    const double theta = 0.5 * std::sqrt(mu / (L * (1.0 + p.L_phi)));
    cfg.payoff.kind = PayoffKind::strongly_convex_split;
    cfg.payoff.mu = mu;
    cfg.payoff.phi = euclid;
    cfg.y_strategy = YOptimisticFtl{};
    cfg.x_strategy = XFtrlPlusSplit{};
    cfg.alpha0 = 1.0;
    cfg.weights = WeightSchedule::exponential(theta, cfg.alpha0 * mu / (2.0 * L * (1.0 + p.L_phi)));
  } else if (name == "boundary_fw") {
    if (!p.set) throw std::invalid_argument("preset 'boundary_fw' needs a feasible set");
    cfg.ordering = Ordering::x_first;
    cfg.x_strategy = XFtl{};
    cfg.y_strategy = YBestResp{};
    cfg.weights = WeightSchedule::uniform();
    if (!p.x0.size()) cfg.x0 = p.set->canonical_point();
  } else if (name == "gauge_fw") {
    need_L();
    if (!p.set || !p.set->has_gauge()) throw std::invalid_argument("preset 'gauge_fw' needs a gauge set");
    const double lambda = p.set->gauge_sq_strong_convexity();
    cfg.y_strategy = YOptimisticFtl{};
    cfg.x_strategy = XGaugeFtrlPlus{p.eta > 0.0 ? p.eta : lambda / (4.0 * L)};
    cfg.weights = WeightSchedule::linear();
  } else if (name == "nuclear_norm") {
    throw std::invalid_argument("preset 'nuclear_norm' runs through nuclear_run (spectrahedron module)");
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown preset '" + name + "'; valid presets: " + known);
  }
  return cfg;
}

// --- classical iterative references ------------------------------------------

struct IterativeResult {
  std::vector<Vec> iterates;  // w_1..T
  Trace trace;
};

/// Classical iterate sequences used as ground truth in equivalence tests.
/// Supported names: frank_wolfe, nesterov_1mem, nesterov_infmem,
/// nesterov_first, heavy_ball, accel_prox.
inline IterativeResult reference_iterative(const std::string& name, const PresetParams& p, int T) {
  const Objective& f = *p.f;
  const double L = p.L > 0.0 ? p.L : f.smoothness();
  const FeasibleSet* set = p.set.get();
  Vec w0 = p.x0.size() ? p.x0 : (set ? set->lmo(f.gradient(set->canonical_point())) : Vec::Zero(f.dim()));

  IterativeResult out;
  Trace trace({"f_value"});
  auto push = [&](int t, const Vec& w) {
    out.iterates.push_back(w);
    double v = f.value(w);
    if (name == "accel_prox" && p.psi) v += p.psi->value(w);
    trace.add_row(t, {v});
  };
  auto proj = [&](Vec z) { return detail::project_or_pass(set, std::move(z)); };

  if (name == "frank_wolfe") {
    if (!set) throw std::invalid_argument("frank_wolfe reference needs a set");
    Vec w = w0;
    for (int t = 1; t <= T; ++t) {
      const double gamma = 2.0 / (t + 1);
      Vec v = set->lmo(f.gradient(w));
      w = (1.0 - gamma) * w + gamma * v;
      push(t, w);
    }
  } else if (name == "nesterov_1mem" || name == "accel_prox") {
    Vec w = w0, v = w0;
    for (int t = 1; t <= T; ++t) {
      const double beta = 2.0 / (t + 1);
      const double gamma = t / (4.0 * L);
      Vec z = (1.0 - beta) * w + beta * v;
      Vec g = f.gradient(z);
      if (name == "accel_prox") {
        if (!p.psi) throw std::invalid_argument("accel_prox reference needs psi");
        v = proj(p.psi->prox(Vec(v - gamma * g), gamma));
      } else {
        v = proj(Vec(v - gamma * g));
      }
      w = (1.0 - beta) * w + beta * v;
      push(t, w);
    }
  } else if (name == "nesterov_infmem") {
    Vec w = w0, v = w0;
    Vec gsum = Vec::Zero(f.dim());
    for (int t = 1; t <= T; ++t) {
      const double beta = 2.0 / (t + 1);
      Vec z = (1.0 - beta) * w + beta * v;
      gsum += (t / (4.0 * L)) * f.gradient(z);
      v = proj(Vec(w0 - gsum));
      w = (1.0 - beta) * w + beta * v;
      push(t, w);
    }
  } else if (name == "nesterov_first" || name == "heavy_ball") {
    // Expanded averaged form: w_t = w_{t-1} - (t/(2(t+1)L)) grad + ((t-2)/(t+1)) (w_{t-1} - w_{t-2}),
    // with the gradient taken at the look-ahead point for the accelerated
    // variant and at w_{t-1} for the heavy-ball pairing.
    Vec w_prev2 = w0, w_prev = w0;
    Vec z = w0;  // nesterov_first look-ahead point
    for (int t = 1; t <= T; ++t) {
      const double theta = t / (2.0 * (t + 1) * L);
      const double beta = (t - 2.0) / (t + 1.0);
      Vec g = (name == "heavy_ball") ? f.gradient(w_prev) : f.gradient(z);
      Vec w = w_prev - theta * g + beta * (w_prev - w_prev2);
      if (name == "nesterov_first") {
        // z_t = w_t + ((t-1)/(t+2))(w_t - w_{t-1}) feeds the next gradient
        z = w + ((t - 1.0) / (t + 2.0)) * (w - w_prev);
      }
      w_prev2 = w_prev;
      w_prev = w;
      push(t, w);
    }
  } else {
    throw std::invalid_argument("reference_iterative: unknown name '" + name + "'");
  }
  out.trace = std::move(trace);
  return out;
}

}  // namespace fgopt
