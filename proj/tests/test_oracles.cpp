#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "fgopt/fgopt.hpp"

using namespace fgopt;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

double finite_diff_component(const Objective& f, const Vec& w, int j, double h) {
  Vec wp = w, wm = w;
  wp[j] += h;
  wm[j] -= h;
  return (f.value(wp) - f.value(wm)) / (2.0 * h);
}

void check_gradient(const Objective& f, const Vec& w, double rel_tol = 1e-5) {
  Vec g = f.gradient(w);
  const double scale = 1.0 + g.norm();
  for (int j = 0; j < f.dim(); ++j) {
    const double fd = finite_diff_component(f, w, j, 1e-5);
    REQUIRE(std::abs(fd - g[j]) <= rel_tol * scale);
  }
}

}  // namespace

TEST_CASE("quadratic oracle basics") {
  auto f = make_quadratic(Mat::Identity(2, 2), Vec::Zero(2));
  REQUIRE(f->value(v2(1, 1)) == Catch::Approx(1.0));
  REQUIRE((f->gradient(v2(1, 1)) - v2(1, 1)).norm() == Catch::Approx(0.0).margin(1e-15));

  // indefinite saddle curvature
  Mat H = Mat::Zero(2, 2);
  H(0, 0) = 1.0;
  H(1, 1) = -0.1;
  auto g = make_quadratic(H, Vec::Zero(2));
  REQUIRE(g->value(Vec::Zero(2)) == 0.0);
  REQUIRE(g->gradient(Vec::Zero(2)).norm() == 0.0);
  REQUIRE(g->strong_convexity() == 0.0);
  REQUIRE(g->smoothness() == Catch::Approx(1.0));

  Mat D = Mat::Zero(2, 2);
  D(0, 0) = 4.0;
  D(1, 1) = 1.0;
  auto h = make_quadratic(D, v2(-4, 0));
  REQUIRE((h->minimizer() - v2(1, 0)).norm() <= 1e-12);

  Mat bad(2, 2);
  bad << 1, 0.5, 0.2, 1;  // asymmetric
  REQUIRE_THROWS_AS(make_quadratic(bad, Vec::Zero(2)), std::invalid_argument);
  REQUIRE_THROWS_AS(make_quadratic(Mat::Zero(2, 3), Vec::Zero(2)), std::invalid_argument);
}

TEST_CASE("gradients match finite differences at random points") {
  Rng rng(71);
  Mat B = rng.gaussian_matrix(4, 4);
  auto quad = make_quadratic(Mat(B.transpose() * B), rng.gaussian_vector(4));
  auto cubic = make_cubic_instance(5).f;
  auto toy = toy_saddle_objective(6, 12);
  auto phase = phase_retrieval_objective(40, 5, 9).objective;

  for (int i = 0; i < 100; ++i) {
    check_gradient(*quad, rng.gaussian_vector(4));
    check_gradient(*cubic, rng.gaussian_vector(4));
    check_gradient(*toy, 0.5 * rng.gaussian_vector(2));
    check_gradient(*phase, rng.gaussian_vector(5));
  }
}

TEST_CASE("declared constants hold on sampled pairs") {
  Rng rng(5);
  Mat B = rng.gaussian_matrix(5, 5);
  auto f = make_quadratic(Mat(B.transpose() * B + Mat::Identity(5, 5)), rng.gaussian_vector(5));
  const double L = f->smoothness(), mu = f->strong_convexity();
  REQUIRE(mu > 0.0);
  for (int i = 0; i < 200; ++i) {
    Vec x = rng.gaussian_vector(5), z = rng.gaussian_vector(5);
    REQUIRE((f->gradient(x) - f->gradient(z)).norm() <= L * (x - z).norm() * (1 + 1e-12));
    REQUIRE(f->value(z) >= f->value(x) + f->gradient(x).dot(z - x) + 0.5 * mu * (z - x).squaredNorm() - 1e-9);
  }
}

TEST_CASE("lmo examples and tie-breaks") {
  Simplex simplex(3);
  Vec v(3);
  v << 3, -1, 2;
  Vec e2 = Vec::Zero(3);
  e2[1] = 1.0;
  REQUIRE((simplex.lmo(v) - e2).norm() == 0.0);

  L2Ball ball(2, 1.0);
  REQUIRE((ball.lmo(v2(3, 4)) - v2(-0.6, -0.8)).norm() <= 1e-15);

  // all-zero direction: canonical point, never a failure
  REQUIRE(ball.contains(ball.lmo(Vec::Zero(2))));
  REQUIRE(simplex.contains(simplex.lmo(Vec::Zero(3))));

  // nuclear ball: top singular pair of the negative gradient
  Rng rng(3);
  NuclearBall nb(4, 3, 2.0);
  Mat G = rng.gaussian_matrix(4, 3);
  Vec g = Eigen::Map<Vec>(G.data(), 12);
  Vec out = nb.lmo(g);
  Eigen::JacobiSVD<Mat> svd(G);
  REQUIRE(out.dot(g) == Catch::Approx(-2.0 * svd.singularValues()(0)).epsilon(1e-10));
  REQUIRE(nb.contains(out, 1e-9));
}

TEST_CASE("lmo optimality against random feasible points") {
  Rng rng(17);
  std::vector<std::shared_ptr<FeasibleSet>> sets{std::make_shared<L2Ball>(4, 1.5),
                                                 std::make_shared<LpBall>(4, 1.5, 1.0),
                                                 std::make_shared<Simplex>(4)};
  for (auto& set : sets) {
    Vec dir = rng.gaussian_vector(4);
    Vec star = set->lmo(dir);
    REQUIRE(set->contains(star));
    for (int i = 0; i < 1000; ++i) {
      // random feasible point via projection or simplex sampling
      Vec x;
      if (set->has_projection()) {
        x = set->project(rng.gaussian_vector(4));
      } else {
        x = set->lmo(rng.gaussian_vector(4));
      }
      REQUIRE(star.dot(dir) <= x.dot(dir) + 1e-9);
    }
  }
}

TEST_CASE("gauge values and homogeneity") {
  L2Ball ball(2, 2.0);
  REQUIRE(gauge_eval(ball, v2(2, 0)) == Catch::Approx(1.0));
  REQUIRE(gauge_eval(ball, v2(1, 0)) == Catch::Approx(0.5));

  LpBall lp(2, 1.5, 1.0);
  const double expected = std::pow(2.0 * std::pow(0.5, 1.5), 2.0 / 3.0);
  REQUIRE(gauge_eval(lp, v2(0.5, 0.5)) == Catch::Approx(expected).epsilon(1e-12));

  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    Vec x = rng.gaussian_vector(2);
    const double rho = 2.0 * rng.next_double();
    REQUIRE(lp.gauge(rho * x) == Catch::Approx(rho * lp.gauge(x)).epsilon(1e-10));
    REQUIRE((lp.gauge(x) <= 1.0) == lp.contains(x, 1e-12));
  }
}

TEST_CASE("soft threshold") {
  REQUIRE((prox_l1(v2(3, -0.5), 1.0) - v2(2, 0)).norm() == 0.0);
  REQUIRE((prox_l1(v2(3, -0.5), 0.0) - v2(3, -0.5)).norm() == 0.0);
  REQUIRE(prox_l1(v2(1, 1), 2.0).norm() == 0.0);
  REQUIRE_THROWS_AS(prox_l1(v2(1, 1), -0.1), std::invalid_argument);

  // variational inequality of the proximal point
  Rng rng(11);
  L1Norm psi;
  for (int i = 0; i < 50; ++i) {
    Vec v = rng.gaussian_vector(3);
    const double lam = 0.1 + rng.next_double();
    Vec p = psi.prox(v, lam);
    const double fp = psi.value(p) + (p - v).squaredNorm() / (2.0 * lam);
    for (int k = 0; k < 20; ++k) {
      Vec z = rng.gaussian_vector(3);
      REQUIRE(fp <= psi.value(z) + (z - v).squaredNorm() / (2.0 * lam) + 1e-12);
    }
  }
}

TEST_CASE("Bregman divergence identities") {
  SquaredEuclidean geom;
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    Vec c = rng.gaussian_vector(3), x = rng.gaussian_vector(3);
    const double d = geom.divergence(c, x);
    const double expected = geom.phi(x) - geom.grad_phi(c).dot(x - c) - geom.phi(c);
    REQUIRE(d == Catch::Approx(expected).margin(1e-12));
    REQUIRE(geom.divergence(x, x) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(d >= 0.5 * geom.strong_convexity() * (x - c).squaredNorm() - 1e-12);
  }
}

TEST_CASE("weight schedules") {
  auto lin = WeightSchedule::linear();
  REQUIRE(lin.alpha(7) == 7.0);
  auto uni = WeightSchedule::uniform();
  auto expo = WeightSchedule::exponential(0.25, 0.5);
  auto custom = WeightSchedule::custom({0.5, 1.5, 2.5});

  for (auto* w : {&lin, &uni, &expo, &custom}) {
    double running = 0.0;
    const int tmax = (w == &custom) ? 3 : 40;
    for (int t = 1; t <= tmax; ++t) {
      running += w->alpha(t);
      REQUIRE(w->cum(t) == Catch::Approx(running).epsilon(1e-12));
    }
  }
  for (int t = 2; t <= 40; ++t) REQUIRE(expo.alpha(t) / expo.cum(t) == Catch::Approx(0.25).epsilon(1e-12));

  REQUIRE_THROWS_AS(WeightSchedule::custom({1.0, -1.0}), std::invalid_argument);
  auto adaptive = WeightSchedule::adaptive_inverse_grad_sq();
  REQUIRE_THROWS_AS(adaptive.alpha(1), std::runtime_error);
  adaptive.push(2.0);
  REQUIRE(adaptive.alpha(1) == 2.0);
}

TEST_CASE("trace rows and CSV format") {
  Trace tr({"a", "b"});
  tr.add_row(1, {1.0 / 3.0, 2.0});
  REQUIRE_THROWS_AS(tr.add_row(1, {0.0, 0.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(tr.add_row(2, {0.0}), std::invalid_argument);
  tr.add_row(2, {0.5, -1.0});
  std::ostringstream os;
  tr.write_csv(os);
  const std::string text = os.str();
  REQUIRE(text.find("t,a,b\n") == 0);
  REQUIRE(text.find("0.33333333333333331") != std::string::npos);  // 17 significant digits
}

TEST_CASE("rng streams are deterministic and labeled") {
  Rng a(1), b(1);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());
  REQUIRE(Rng::derive(1, "x", 0) != Rng::derive(1, "y", 0));
  REQUIRE(Rng::derive(1, "x", 0) != Rng::derive(1, "x", 1));
  Rng s(7);
  Vec u = s.sphere_vector(5);
  REQUIRE(u.norm() == Catch::Approx(1.0).epsilon(1e-12));
}
