#include <catch2/catch_amalgamated.hpp>

#include "fgopt/fgopt.hpp"

using namespace fgopt;

TEST_CASE("toy objective values at the origin") {
  auto f = toy_saddle_objective(10, 99);
  REQUIRE(f->value(Vec::Zero(2)) == 0.0);

  // full gradient at the origin is the mean offset
  Vec mean = Vec::Zero(2);
  for (int i = 0; i < 10; ++i) {
    Vec g = f->component_gradient(Vec::Zero(2), i);
    mean += g;
  }
  mean /= 10.0;
  REQUIRE((f->gradient(Vec::Zero(2)) - mean).norm() <= 1e-14);

  // Hessian at the origin: the power term contributes nothing
  Mat H = f->hessian(Vec::Zero(2));
  REQUIRE(H(0, 0) == Catch::Approx(1.0));
  REQUIRE(H(1, 1) == Catch::Approx(-0.1));
  REQUIRE(H(0, 1) == 0.0);
}

TEST_CASE("momentum run with beta zero is plain seeded sgd") {
  auto f = toy_saddle_objective(8, 5);
  SaddleConfig cfg;
  cfg.eta = 1e-4;
  cfg.r = 1e-4;
  cfg.beta = 0.0;
  cfg.T_thred = 1 << 30;
  cfg.T = 500;
  cfg.seed = 77;
  auto res = cnc_sgd_run(*f, cfg, Vec::Zero(2), /*record_iterates=*/true);

  Vec w = Vec::Zero(2);
  for (int t = 0; t <= 500; ++t) {
    REQUIRE((res.iterates[t] - w).norm() <= 1e-15);
    Vec g = f->stochastic_gradient(w, Rng::derive(77, "sgd", static_cast<std::uint64_t>(t)));
    w -= 1e-4 * g;
  }
}

TEST_CASE("deterministic convex quadratic descends monotonically") {
  Mat H = 2.0 * Mat::Identity(2, 2);
  Vec b(2);
  b << 1.0, -0.5;
  auto one = std::make_shared<FiniteSumObjective>(
      2, 1, [H, b](const Vec& w) { return 0.5 * w.dot(H * w) + b.dot(w); },
      [H, b](const Vec& w) { return Vec(H * w + b); }, [H, b](const Vec& w, int) { return Vec(H * w + b); });
  SaddleConfig cfg;
  cfg.eta = 0.05;
  cfg.r = 0.05;
  cfg.beta = 0.0;
  cfg.T_thred = 1 << 30;
  cfg.T = 200;
  auto res = cnc_sgd_run(*one, cfg, Vec::Ones(2));
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    REQUIRE(res.trace.value(i, "f_value") <= res.trace.value(i - 1, "f_value") + 1e-12);
}

TEST_CASE("boost schedule fires floor(T / T_thred) + 1 times") {
  auto f = toy_saddle_objective(4, 1);
  for (int T : {10, 100, 105}) {
    for (int thred : {10, 33}) {
      SaddleConfig cfg;
      cfg.eta = 1e-5;
      cfg.r = 1e-4;
      cfg.beta = 0.5;
      cfg.T_thred = thred;
      cfg.T = T;
      auto res = cnc_sgd_run(*f, cfg, Vec::Zero(2));
      int boosts = 0;
      for (std::size_t i = 0; i < res.trace.size(); ++i) boosts += res.trace.value(i, "boost") > 0.5;
      REQUIRE(boosts == T / thred + 1);
    }
  }
  SaddleConfig bad;
  bad.eta = 1e-4;
  bad.r = 1e-5;  // r < eta violates the parameter table constraint
  REQUIRE_THROWS_AS(cnc_sgd_run(*f, bad, Vec::Zero(2)), std::invalid_argument);
}

TEST_CASE("momentum buffer unrolls to a geometric sum of gradients") {
  auto f = toy_saddle_objective(6, 3);
  const double beta = 0.7, eta = 1e-4;
  Vec w = Vec::Zero(2), m = Vec::Zero(2);
  std::vector<Vec> gs;
  for (int t = 0; t <= 50; ++t) {
    Vec g = f->stochastic_gradient(w, Rng::derive(4, "sgd", static_cast<std::uint64_t>(t)));
    gs.push_back(g);
    m = beta * m + g;
    Vec direct = Vec::Zero(2);
    for (int s = 0; s <= t; ++s) direct += std::pow(beta, t - s) * gs[s];
    REQUIRE((m - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
    w -= eta * m;
  }
}

TEST_CASE("phase retrieval oracle and sign symmetry") {
  auto prob = phase_retrieval_objective(60, 6, 13);
  REQUIRE(prob.objective->value(prob.w_star) == Catch::Approx(0.0).margin(1e-20));
  REQUIRE(prob.objective->value(Vec(-prob.w_star)) == Catch::Approx(0.0).margin(1e-20));

  Rng rng(15);
  for (int k = 0; k < 50; ++k) {
    Vec w = rng.gaussian_vector(6);
    Vec g = prob.objective->gradient(w);
    for (int j = 0; j < 6; ++j) {
      Vec wp = w, wm = w;
      wp[j] += 1e-6;
      wm[j] -= 1e-6;
      const double fd = (prob.objective->value(wp) - prob.objective->value(wm)) / 2e-6;
      REQUIRE(std::abs(fd - g[j]) <= 1e-5 * (1.0 + std::abs(g[j])));
    }
    // the progress metric is invariant under the global sign flip
    PhaseRetrievalProblem flipped = prob;
    flipped.w_star = -prob.w_star;
    REQUIRE(prob.relative_distance(w) == Catch::Approx(flipped.relative_distance(w)).margin(1e-15));
  }
}

TEST_CASE("over-parametrized objective and its distance metric") {
  const int d = 6, n = 40, K = 3;
  auto over = overparam_phase_objective(K, d, n, 13);
  auto base = phase_retrieval_objective(n, d, 13);

  // at W = w* q^T with unit q the objective and the distance vanish
  Rng rng(17);
  Vec q = rng.sphere_vector(K);
  Mat W = over.w_star * q.transpose();
  Vec wflat = Eigen::Map<Vec>(W.data(), d * K);
  REQUIRE(over.objective->value(wflat) <= 1e-20);
  REQUIRE(over.distance(wflat) <= 1e-12);

  // K = 1 matches the plain problem on the same seed
  auto single = overparam_phase_objective(1, d, n, 13);
  for (int k = 0; k < 20; ++k) {
    Vec w = rng.gaussian_vector(d);
    REQUIRE(single.objective->value(w) == Catch::Approx(base.objective->value(w)).epsilon(1e-12));
  }

  // distance at the origin is the target norm
  REQUIRE(over.distance(Vec::Zero(d * K)) == Catch::Approx(over.w_star.norm()).epsilon(1e-12));
}

TEST_CASE("alignment diagnostics") {
  auto f = toy_saddle_objective(6, 21);
  const double eta = 5e-5, beta = 0.9, eps = 0.02;
  SaddleDiagnostics diag(eta, beta, 200, eps);

  // with m = g the gradient-alignment numerator vanishes
  Vec w(2);
  w << 0.5, 0.1;
  Vec g = f->gradient(w);
  auto row = diag.evaluate(*f, 0, w, g, g);
  if (row.apag_regime) REQUIRE(row.apag_ratio == Catch::Approx(0.0).margin(1e-12));

  // convex curvature keeps the non-alignment value nonnegative when m = g
  Mat H = 2.0 * Mat::Identity(2, 2);
  auto convex = std::make_shared<FiniteSumObjective>(
      2, 1, [H](const Vec& v) { return 0.5 * v.dot(H * v); }, [H](const Vec& v) { return Vec(H * v); },
      [H](const Vec& v, int) { return Vec(H * v); });
  convex->set_hessian([H](const Vec&) { return H; });
  Vec m = Vec::Ones(2);
  auto row2 = SaddleDiagnostics(0.01, 0.5, 50, eps).evaluate(*convex, 0, Vec::Ones(2), m, m);
  REQUIRE(row2.grace_value >= 0.0);

  // eigen route equals the explicit matrix product on small cases
  for (int tau : {5, 17}) {
    SaddleDiagnostics dd(0.02, 0.6, tau, eps, 2);
    Rng rng(23);
    Mat B = rng.gaussian_matrix(3, 3);
    Mat hess = 0.5 * (B + B.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(hess);
    bool psd_ok = true;
    Mat M = Mat::Zero(3, 3);
    Vec factors(3);
    for (int i = 0; i < 3; ++i) {
      double fac;
      if (!dd.product_factor(es.eigenvalues()[i], &fac)) {
        psd_ok = false;
        break;
      }
      factors[i] = fac;
    }
    if (psd_ok) {
      M = es.eigenvectors() * factors.asDiagonal() * es.eigenvectors().transpose();
      REQUIRE((M - dd.explicit_product(hess)).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("higher momentum escapes the saddle region sooner") {
  auto f = toy_saddle_objective(10, Rng::derive(321, "toy"));
  auto escape_time = [&](double beta, int T) -> long long {
    SaddleConfig cfg;
    cfg.eta = 5e-5;
    cfg.r = 5e-5;
    cfg.beta = beta;
    cfg.T_thred = 1 << 30;
    cfg.T = T;
    cfg.seed = 321;
    auto res = cnc_sgd_run(*f, cfg, Vec::Zero(2));
    for (std::size_t i = 0; i < res.trace.size(); ++i)
      if (res.trace.value(i, "f_value") <= -0.01) return res.trace.iteration(i);
    return -1;
  };
  const long long fast = escape_time(0.9, 100000);
  const long long slow = escape_time(0.0, 100000);
  REQUIRE(fast > 0);
  REQUIRE(slow == -1);  // plain sgd is still stuck at this horizon
}
