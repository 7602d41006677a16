#include <catch2/catch_amalgamated.hpp>

#include "fgopt/fgopt.hpp"

using namespace fgopt;

namespace {

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}

}  // namespace

TEST_CASE("buffer and two-point forms produce identical iterates") {
  Rng rng(3);
  Mat B = rng.gaussian_matrix(4, 4);
  auto quad = make_quadratic(Mat(B.transpose() * B + Mat::Identity(4, 4)), rng.gaussian_vector(4));
  auto cubic = make_cubic_instance(9).f;
  for (const Objective* f : {static_cast<const Objective*>(quad.get()), static_cast<const Objective*>(cubic.get())}) {
    MomentumConfig cfg;
    cfg.eta = 0.05;
    cfg.beta = 0.8;
    cfg.w0 = rng.gaussian_vector(4);
    auto a = heavy_ball_run(cfg, *f, 1000);
    auto b = heavy_ball_run_buffer(cfg, *f, 1000);
    for (std::size_t i = 0; i < a.size(); ++i)
      REQUIRE(a.value(i, "f_value") == Catch::Approx(b.value(i, "f_value")).margin(1e-10));
  }
}

TEST_CASE("zero momentum is plain gradient descent") {
  Rng rng(5);
  Mat B = rng.gaussian_matrix(3, 3);
  auto f = make_quadratic(Mat(B.transpose() * B + Mat::Identity(3, 3)), rng.gaussian_vector(3));
  MomentumConfig cfg;
  cfg.eta = 0.07;
  cfg.beta = 0.0;
  cfg.w0 = rng.gaussian_vector(3);
  auto tr = heavy_ball_run(cfg, *f, 200);
  Vec w = cfg.w0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    w -= cfg.eta * f->gradient(w);
    REQUIRE(tr.value(i, "f_value") == Catch::Approx(f->value(w)).margin(1e-12));
  }

  // one exact step in one dimension
  auto g = make_quadratic(Mat::Identity(1, 1), Vec::Zero(1));
  MomentumConfig one;
  one.eta = 1.0;
  one.beta = 0.0;
  one.w0 = v1(5.0);
  auto t1 = heavy_ball_run(one, *g, 1);
  REQUIRE(t1.value(0, "f_value") == Catch::Approx(0.0).margin(1e-30));
}

TEST_CASE("power-bound constant values") {
  REQUIRE(c0_constant(0.25, 1.0, 1.0) == Catch::Approx(1.8257).margin(1e-3));
  REQUIRE(momentum_h(0.25, 1.0) == Catch::Approx(0.9375));

  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const double zmin = 0.01 + rng.next_double();
    const double zmax = zmin + rng.next_double();
    const double thr = momentum_admissibility_threshold(zmin, zmax);
    const double beta = thr + (1.0 - thr) * (0.05 + 0.9 * rng.next_double());
    REQUIRE(c0_constant(beta, zmin, zmax) >= 1.0);
  }
  for (double kappa : {1.0, 10.0, 100.0}) {
    const double beta = std::pow(1.0 - 0.5 / std::sqrt(kappa), 2);
    REQUIRE(c0_constant(beta, 1.0 / kappa, 1.0) <= 4.0 * std::sqrt(kappa));
  }
  REQUIRE_THROWS_WITH(c0_constant(0.01, 0.25, 1.0), Catch::Matchers::ContainsSubstring("inadmissible"));
}

TEST_CASE("matrix-power bound checks") {
  // scalar curvature: validate the explicit power against the two-term recurrence
  const double lambda = 2.0, eta = 0.3, beta = 0.6;
  Mat H(1, 1);
  H << lambda;
  Vec x(2);
  x << 1.0, -0.5;
  auto res = akv_bound_check(H, x, eta, beta, 150);
  REQUIRE(res.holds);

  double xk = x[0], xk1 = x[1];  // recurrence x_{k+1} = (1+b-el) x_k - b x_{k-1}
  Mat A(2, 2);
  A << 1 + beta - eta * lambda, -beta, 1, 0;
  Vec v = x;
  for (int k = 0; k < 20; ++k) {
    const double next = (1 + beta - eta * lambda) * xk - beta * xk1;
    v = A * v;
    xk1 = xk;
    xk = next;
    REQUIRE(v[0] == Catch::Approx(xk).margin(1e-12));
  }

  // k = 0 is covered because the constant is at least one
  REQUIRE(res.worst_ratio >= v.norm() * 0.0);  // worst ratio finite
  REQUIRE(res.constant >= 1.0);

  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + rng.next_int(5);
    Mat B = rng.gaussian_matrix(n, n);
    Mat Hr = B.transpose() * B + 0.1 * Mat::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<Mat> es(Hr, Eigen::EigenvaluesOnly);
    const double emin = es.eigenvalues().minCoeff(), emax = es.eigenvalues().maxCoeff();
    const double et = 1.0 / emax;
    const double thr = momentum_admissibility_threshold(et * emin, et * emax);
    const double b = thr + (1.0 - thr) * (0.1 + 0.8 * rng.next_double());
    auto r = akv_bound_check(Hr, Vec(rng.gaussian_vector(2 * n)), et, b, 200);
    REQUIRE(r.holds);
  }
}

TEST_CASE("tuned parameter pairs") {
  auto q = tuned_params(MomentumProblem::quadratic, 1.0, 100.0);
  REQUIRE(q.eta == Catch::Approx(0.01));
  REQUIRE(q.beta == Catch::Approx(0.95 * 0.95));

  auto unit = tuned_params(MomentumProblem::quadratic, 2.0, 2.0);
  REQUIRE(unit.beta == Catch::Approx(0.25));

  auto dl = tuned_params(MomentumProblem::deep_linear, 1.0, 2.0, 4.0, 10.0);
  REQUIRE(dl.eta == Catch::Approx(0.2));

  REQUIRE_THROWS_AS(tuned_params(MomentumProblem::quadratic, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("tuned heavy ball obeys the residual envelope") {
  const double kappa = 100.0;
  Rng rng(11);
  Vec diag(4);
  diag << 1.0, 20.0, 60.0, kappa;
  auto f = make_quadratic(Mat(diag.asDiagonal()), rng.gaussian_vector(4));
  Vec wstar = f->minimizer();
  auto cfg = tuned_params(MomentumProblem::quadratic, 1.0, kappa);
  cfg.w0 = Vec::Zero(4);
  auto tr = heavy_ball_run(cfg, *f, 2000, wstar);
  const double init = std::sqrt(2.0) * wstar.norm();
  const double sb = 1.0 - 0.5 / std::sqrt(kappa);
  double pw = 1.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    pw *= sb;
    const double r = tr.value(i, "stacked_residual");
    if (r <= 1e-12 * init) continue;
    REQUIRE(r <= pw * 4.0 * std::sqrt(kappa) * init * (1.0 + 1e-6));
  }
}

TEST_CASE("relu network oracle facts") {
  Rng rng(13);
  const int n = 5, d = 10, m = 1000;
  Mat X(d, n);
  for (int i = 0; i < n; ++i) {
    Vec x = rng.gaussian_vector(d);
    X.col(i) = x / x.norm();
  }
  Vec y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.next_double() < 0.5 ? -1.0 : 1.0;
  ReluNet net(m, X, y, 17);

  // Gram matrix against an independent reconstruction
  Mat H = net.gram();
  const Mat& W = net.weights();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double count = 0.0;
      for (int r = 0; r < m; ++r)
        if (W.col(r).dot(X.col(i)) >= 0.0 && W.col(r).dot(X.col(j)) >= 0.0) count += 1.0;
      REQUIRE(H(i, j) == Catch::Approx(X.col(i).dot(X.col(j)) * count / m).margin(1e-12));
    }
  for (int i = 0; i < n; ++i) REQUIRE(H(i, i) <= 1.0 + 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
  REQUIRE(es.eigenvalues().minCoeff() > 0.0);  // non-parallel inputs

  // zero-residual labels are a fixed point of training
  Vec y0 = net.forward();
  ReluNet fixed(m, X, y0, 17);
  auto tr = fixed.train(0.5, 0.9, 10);
  for (std::size_t i = 0; i < tr.size(); ++i) REQUIRE(tr.value(i, "loss") <= 1e-24);

  // beta = 0 equals a hand-rolled subgradient descent loop
  ReluNet a(m, X, y, 17);
  auto ta = a.train(0.3, 0.0, 5);
  ReluNet b(m, X, y, 17);
  for (int step = 0; step < 5; ++step) {
    b.set_weights(Mat(b.weights() - 0.3 * b.subgradient()));
    REQUIRE(b.loss() == Catch::Approx(ta.value(step, "loss")).margin(1e-18));
  }
}

TEST_CASE("deep linear network init and training") {
  const int L = 6, m = 12, d = 3, dy = 2;
  DeepLinearNet net(L, m, d, dy, 21);
  // scaled orthogonality at every layer
  REQUIRE((net.layer(0).transpose() * net.layer(0) - m * Mat::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-8);
  REQUIRE((net.layer(L - 1) * net.layer(L - 1).transpose() - m * Mat::Identity(dy, dy)).cwiseAbs().maxCoeff() <=
          1e-8);
  for (int l = 1; l < L - 1; ++l)
    REQUIRE((net.layer(l).transpose() * net.layer(l) - m * Mat::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-8);

  REQUIRE_THROWS_AS(DeepLinearNet(3, 2, 3, 3, 1), std::invalid_argument);

  // labels equal to the initial output: residual stays zero
  Rng rng(23);
  Mat X = rng.gaussian_matrix(d, 4);
  DeepLinearNet fixed(L, m, d, dy, 21);
  Mat Y0 = fixed.forward(X);
  auto tr = fixed.train(X, Y0, 0.01, 0.5, 20);
  for (std::size_t i = 0; i < tr.size(); ++i) REQUIRE(tr.value(i, "residual") <= 1e-10);
}

TEST_CASE("cubic instance construction and momentum ordering") {
  auto inst = make_cubic_instance(2024);
  REQUIRE(inst.f->gradient(inst.w_star).norm() <= 1e-10);
  REQUIRE(inst.w_star.norm() == Catch::Approx(1.0).epsilon(1e-12));

  auto time_to_gap = [&](double beta) {
    MomentumConfig cfg;
    cfg.eta = 0.01;
    cfg.beta = beta;
    Rng rng(Rng::derive(2024, "cubic-w0"));
    cfg.w0 = rng.gaussian_vector(inst.f->dim());
    auto tr = cubic_regularized_experiment(inst, cfg, 20000);
    for (std::size_t i = 0; i < tr.size(); ++i)
      if (tr.value(i, "gap") <= 1e-6) return static_cast<long long>(tr.iteration(i));
    return static_cast<long long>(-1);
  };
  const long long slow = time_to_gap(0.0);
  const long long fast = time_to_gap(0.9);
  REQUIRE(fast > 0);
  REQUIRE((slow < 0 || fast < slow));

  // rho = 0 reduces to the plain quadratic oracle
  Rng rng(31);
  Mat B = rng.gaussian_matrix(3, 3);
  Mat A = 0.5 * (B + B.transpose());
  Vec b = rng.gaussian_vector(3);
  CubicRegularizedObjective cube(A, b, 0.0);
  QuadraticObjective quad(A, b);
  for (int k = 0; k < 20; ++k) {
    Vec w = rng.gaussian_vector(3);
    REQUIRE(cube.value(w) == Catch::Approx(quad.value(w)).margin(1e-12));
    REQUIRE((cube.gradient(w) - quad.gradient(w)).norm() <= 1e-12);
  }
}
