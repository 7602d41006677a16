#include <catch2/catch_amalgamated.hpp>

#include "fgopt/fgopt.hpp"

using namespace fgopt;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::shared_ptr<QuadraticObjective> random_spd_quadratic(int d, std::uint64_t seed) {
  Rng rng(seed);
  Mat B = rng.gaussian_matrix(d, d);
  return make_quadratic(Mat(B.transpose() * B + Mat::Identity(d, d)), rng.gaussian_vector(d));
}

}  // namespace

TEST_CASE("one-round unrolling from the optimum") {
  auto f = random_spd_quadratic(3, 2);
  auto ball = std::make_shared<L2Ball>(3, 1.0);
  Vec x0 = ball->project(f->minimizer());
  PresetParams pp;
  pp.f = f;
  pp.set = ball;
  pp.T = 1;
  pp.x0 = x0;
  auto res = run_dynamics(preset("frank_wolfe", pp), ball.get());
  REQUIRE((res.x_bar - ball->lmo(f->gradient(x0))).norm() <= 1e-15);
}

TEST_CASE("running averages match recomputation") {
  auto f = random_spd_quadratic(4, 3);
  auto ball = std::make_shared<L2Ball>(4, 1.5);
  PresetParams pp;
  pp.f = f;
  pp.set = ball;
  pp.T = 60;
  pp.x0 = ball->canonical_point();
  auto cfg = preset("frank_wolfe", pp);
  auto res = run_dynamics(cfg, ball.get());
  double A = 0.0;
  Vec sum = Vec::Zero(4);
  for (int t = 1; t <= 60; ++t) {
    const double alpha = res.weights.alpha(t);
    A += alpha;
    sum += alpha * res.xs[t - 1];
    REQUIRE((res.xbars[t - 1] - sum / A).norm() <= 1e-12 * (1.0 + res.xbars[t - 1].norm()));
  }
}

TEST_CASE("preset parameters match their published pairings") {
  auto f = random_spd_quadratic(2, 5);
  PresetParams pp;
  pp.f = f;
  pp.set = std::make_shared<L2Ball>(2, 1.0);
  pp.x0 = Vec::Zero(2);

  REQUIRE(preset("frank_wolfe", pp).weights.alpha(7) == 7.0);

  PresetParams p2 = pp;
  p2.L = 2.0;
  auto nes = preset("nesterov_1mem", p2);
  REQUIRE(std::get<XOmdPlus>(nes.x_strategy).gamma == Catch::Approx(1.0 / 8.0));

  PresetParams p3 = pp;
  p3.mu = 1.0;
  p3.L = 4.0;
  p3.L_phi = 1.0;
  auto acc = preset("accel_linear", p3);
  const double theta = 0.5 * std::sqrt(1.0 / 8.0);
  for (int t = 2; t <= 20; ++t)
    REQUIRE(acc.weights.alpha(t) / acc.weights.cum(t) == Catch::Approx(theta).epsilon(1e-12));

  REQUIRE_THROWS_WITH(preset("no_such_method", pp), Catch::Matchers::ContainsSubstring("valid presets"));
  REQUIRE_THROWS_AS(preset("nuclear_norm", pp), std::invalid_argument);
}

TEST_CASE("equivalence of game averages and the classical iterations") {
  const int T = 80;
  for (const std::string name :
       {"frank_wolfe", "nesterov_1mem", "nesterov_infmem", "nesterov_first", "heavy_ball", "accel_prox"}) {
    for (std::uint64_t s : {1, 2}) {
      Rng rng(Rng::derive(s, "equiv-t"));
      const int d = 4;
      Mat B = rng.gaussian_matrix(d, d);
      Mat G = B.transpose() * B + Mat::Identity(d, d);
      // boundary-active instance keeps LMO-based pairings numerically coupled
      Vec target = 3.0 * rng.sphere_vector(d);
      auto f = make_quadratic(G, Vec(-G * target));
      PresetParams pp;
      pp.f = f;
      pp.T = T;
      pp.x0 = 0.3 * rng.sphere_vector(d);
      std::shared_ptr<L2Ball> ball;
      if (name == "frank_wolfe" || name == "nesterov_1mem" || name == "nesterov_infmem") {
        ball = std::make_shared<L2Ball>(d, 2.0);
        pp.set = ball;
      }
      std::shared_ptr<L1Norm> psi;
      if (name == "accel_prox") {
        psi = std::make_shared<L1Norm>(0.05);
        pp.psi = psi;
      }
      auto res = run_dynamics(preset(name, pp), ball.get());
      auto ref = reference_iterative(name, pp, T);
      for (int t = 0; t < T; ++t) REQUIRE((ref.iterates[t] - res.xbars[t]).norm() <= 1e-9);
    }
  }
}

TEST_CASE("equilibrium gap facts") {
  auto f = random_spd_quadratic(3, 7);
  L2Ball ball(3, 4.0);
  Vec xstar = f->minimizer();
  REQUIRE(ball.contains(xstar));
  REQUIRE(equilibrium_gap(xstar, f->gradient(xstar), *f, ball) <= 1e-9);

  Rng rng(19);
  for (int i = 0; i < 100; ++i) {
    Vec x = ball.project(rng.gaussian_vector(3));
    Vec y = rng.gaussian_vector(3);
    REQUIRE(equilibrium_gap(x, y, *f, ball) >= 0.0);
  }
}

TEST_CASE("conditional-gradient gap certificate at T = 100") {
  Vec c = v2(2, 0);
  auto f = make_quadratic(Mat::Identity(2, 2), Vec(-c));
  auto ball = std::make_shared<L2Ball>(2, 1.0);
  PresetParams pp;
  pp.f = f;
  pp.set = ball;
  pp.T = 100;
  pp.x0 = v2(0, 1);
  pp.x_star = Vec(c / c.norm());
  auto cfg = preset("frank_wolfe", pp);
  auto res = run_dynamics(cfg, ball.get());
  const double fstar = f->value(*pp.x_star);
  REQUIRE(res.trace.back("f_value") - fstar <= 8.0 * 1.0 * 4.0 / 101.0);

  const double gap = equilibrium_gap(res.x_bar, res.y_bar, *f, *ball);
  const double A_T = res.weights.cum(100);
  REQUIRE(gap <= 8.0 * 4.0 / 101.0 + std::abs(res.x_regret) / A_T + 1e-9);

  // the meta identity: suboptimality below the averaged regret sum
  REQUIRE(res.trace.back("f_value") - fstar <= res.trace.back("gap_est") + 1e-10);
}

TEST_CASE("gap identity holds along accelerated runs") {
  auto f = random_spd_quadratic(4, 11);
  Vec xstar = f->minimizer();
  PresetParams pp;
  pp.f = f;
  pp.T = 120;
  pp.x0 = Vec::Zero(4);
  pp.x_star = xstar;
  for (const std::string name : {"nesterov_first", "heavy_ball"}) {
    auto res = run_dynamics(preset(name, pp), nullptr);
    const double fstar = f->value(xstar);
    for (std::size_t i = 0; i < res.trace.size(); ++i)
      REQUIRE(res.trace.value(i, "f_value") - fstar <= res.trace.value(i, "gap_est") + 1e-9);
  }
}

TEST_CASE("adaptive weights cap degenerate gradients") {
  // constant objective: the y-player loss gradient vanishes immediately
  auto f = make_quadratic(Mat::Zero(2, 2), Vec::Zero(2));
  auto ball = std::make_shared<L2Ball>(2, 1.0);
  PresetParams pp;
  pp.f = f;
  pp.set = ball;
  pp.T = 3;
  pp.x0 = ball->canonical_point();
  auto res = run_dynamics(preset("fw_linear_rate", pp), ball.get());
  REQUIRE(res.weights.alpha(1) == 1e12);  // degenerate gradient hits the cap
  for (int t = 2; t <= 3; ++t) REQUIRE(res.weights.alpha(t) <= 1e12);
}

TEST_CASE("incremental pairing reproduces the cyclic averaging loop") {
  const int d = 3, n = 4, T = 40;
  Rng rng(59);
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
  auto res = run_dynamics(preset("incremental_fw", pp), ball.get());

  // direct loop: cyclic component refresh, lmo, running uniform average
  std::vector<Vec> table(n);
  Vec gsum = Vec::Zero(d);
  for (int i = 0; i < n; ++i) {
    table[i] = (pp.x0 - (*centers)[i]) / n;
    gsum += table[i];
  }
  Vec w = pp.x0;
  for (int t = 1; t <= T; ++t) {
    const int it = (t - 1) % n;
    gsum -= table[it];
    table[it] = (w - (*centers)[it]) / n;
    gsum += table[it];
    Vec v = ball->lmo(gsum);
    w = (1.0 - 1.0 / t) * w + (1.0 / t) * v;
    REQUIRE((w - res.xbars[t - 1]).norm() <= 1e-12);
  }
}

TEST_CASE("smoothed pairing with zero noise equals the plain uniform pairing") {
  auto f = random_spd_quadratic(3, 91);
  auto ball = std::make_shared<L2Ball>(3, 1.0);
  PresetParams pp;
  pp.f = f;
  pp.set = ball;
  pp.T = 30;
  pp.x0 = ball->canonical_point();
  pp.noise_scale = 0.0;
  auto smoothed = run_dynamics(preset("smoothed_fw", pp), ball.get());
  auto plain = run_dynamics(preset("fw_uniform", pp), ball.get());
  for (int t = 0; t < 30; ++t) REQUIRE((smoothed.xbars[t] - plain.xbars[t]).norm() == 0.0);
}

TEST_CASE("swapped ordering reproduces the boundary method") {
  const int d = 3;
  Rng rng(73);
  Vec c = 2.0 * rng.sphere_vector(d);
  auto f = std::make_shared<SubgradientObjective>(
      d, [c](const Vec& w) { return (w - c).norm(); },
      [c](const Vec& w) {
        Vec g = w - c;
        const double n = g.norm();
        return n > 0.0 ? Vec(g / n) : Vec(Vec::Zero(w.size()));
      },
      1.0);
  auto ball = std::make_shared<L2Ball>(d, 1.0);

  PresetParams pp;
  pp.f = f;
  pp.set = ball;
  pp.T = 50;
  auto cfg = preset("boundary_fw", pp);
  auto game = run_dynamics(cfg, ball.get());
  auto direct = boundary_fw(*f, *ball, 50, cfg.x0);
  REQUIRE((game.x_bar - direct.x_bar).norm() <= 1e-13);
  for (std::size_t i = 0; i < direct.trace.size(); ++i)
    REQUIRE(game.trace.value(i, "f_value") == Catch::Approx(direct.trace.value(i, "f_avg")).margin(1e-12));
}

TEST_CASE("divergent runs report the failing round") {
  // a concave direction makes the heavy-ball pairing blow up
  Mat G(1, 1);
  G << -1.0;
  auto f = std::make_shared<FunctionObjective>(
      1, [](const Vec& w) { return -0.5 * w[0] * w[0] * 1e8; },
      [](const Vec& w) { return Vec(-1e8 * w); }, 1.0);
  PresetParams pp;
  pp.f = std::static_pointer_cast<const Objective>(f);
  pp.T = 5000;
  Vec x0(1);
  x0 << 1.0;
  pp.x0 = x0;
  REQUIRE_THROWS_WITH(run_dynamics(preset("heavy_ball", pp), nullptr),
                      Catch::Matchers::ContainsSubstring("round"));
}
