#pragma once

#include <cmath>
#include <functional>
#include <future>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fgopt/rng.hpp"
#include "fgopt/trace.hpp"
#include "fgopt/types.hpp"

namespace fgopt {

// Spectrahedron machinery for the nuclear-norm-ball solver: the ball
// {|W|_* <= r} over d1 x d2 matrices embeds into the set of symmetric PSD
// trace-one matrices of size d = d1 + d2, with the candidate solution read
// off the off-diagonal block as 2r * X^(2).

/// Symmetric PSD trace-one matrix with block views.
struct SpectrahedronPoint {
  Mat X;  // (d1+d2) x (d1+d2)
  int d1 = 0, d2 = 0;

  Mat block1() const { return X.topLeftCorner(d1, d1); }
  Mat block2() const { return X.topRightCorner(d1, d2); }
  Mat block3() const { return X.bottomRightCorner(d2, d2); }

  double trace() const { return X.trace(); }
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(X, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  static SpectrahedronPoint uniform(int d1, int d2) {
    SpectrahedronPoint p;
    p.d1 = d1;
    p.d2 = d2;
    const int d = d1 + d2;
    p.X = Mat::Identity(d, d) / d;
    return p;
  }
};

/// Eigendecomposition of a symmetric matrix with a shifted half-exponential
/// applied on the spectrum. The shift by lambda_max cancels in the
/// normalization of the rank-one projection and keeps exp() in range.
class SpectralExpHalf {
 public:
  explicit SpectralExpHalf(const Mat& D) {
    if (!D.allFinite()) throw std::invalid_argument("matrix exponential: non-finite entries");
    Eigen::SelfAdjointEigenSolver<Mat> es(D);
    q_ = es.eigenvectors();
    const Vec& lam = es.eigenvalues();
    const double shift = lam.maxCoeff();
    exp_half_ = ((lam.array() - shift) / 2.0).exp().matrix();
  }

  /// exp((D - shift I)/2) u
  Vec apply(const Vec& u) const { return q_ * (exp_half_.asDiagonal() * (q_.transpose() * u)); }

 private:
  Mat q_;
  Vec exp_half_;
};

/// Randomized rank-one projection onto the spectrahedron:
/// Psi_u(D) = exp(D/2) u u' exp(D/2) / (u' exp(D) u), computed through a
/// dense eigendecomposition of D.
inline Mat psi_oracle(const Mat& D, const Vec& u) {
  if (std::abs(u.norm() - 1.0) > 1e-12) throw std::invalid_argument("psi_oracle: u must be unit norm");
  SpectralExpHalf sp(D);
  Vec v = sp.apply(u);
  const double n2 = v.squaredNorm();
  return (v * v.transpose()) / n2;
}

/// Symmetric embedding of a d1 x d2 gradient into S_{d1+d2} with zero
/// diagonal blocks.
inline Mat embed_gradient(const Mat& grad_f) {
  const int d1 = static_cast<int>(grad_f.rows());
  const int d2 = static_cast<int>(grad_f.cols());
  Mat out = Mat::Zero(d1 + d2, d1 + d2);
  out.topRightCorner(d1, d2) = grad_f;
  out.bottomLeftCorner(d2, d1) = grad_f.transpose();
  return out;
}

/// Smooth objective over d1 x d2 matrices for the nuclear-norm solver.
struct MatrixObjective {
  int d1 = 0, d2 = 0;
  double L = 0.0;  // smoothness of f over the ball
  std::function<double(const Mat&)> value;
  std::function<Mat(const Mat&)> gradient;
};

struct NuclearRunResult {
  Mat W_out;  // 2r * W_T^(2), nuclear norm <= r
  Trace trace;
  SpectrahedronPoint W_T;
};

/// Momentum-averaged matrix-multiplicative-weights solver over the
/// nuclear-norm ball. Per round: look-ahead point Z_t, gradient accumulator
/// G_t = G_{t-1} - eta t grad F_r(Z_t), then X_t is the mean of m_t
/// randomized rank-one projections Psi_u(G_t), with
/// m_t = max(ceil(log(4d/delta)), t). Oracle draws use per-(t, j) seeds and
/// may execute concurrently; they are always combined in index order so the
/// output is independent of thread scheduling.
///
/// Requires eta <= 1/(36 Lhat) with Lhat <= 2 r L; eta = 0 picks the bound.
/// m_override > 0 freezes the oracle-call count at that value (testing seam
/// for the Monte-Carlo averaging contract).
inline NuclearRunResult nuclear_run(const MatrixObjective& f, double r, double eta, double delta, int T,
                                    std::uint64_t seed, int parallelism_hint = 1, double Lhat_override = 0.0,
                                    int m_override = 0) {
  if (f.d1 <= 0 || f.d2 <= 0) throw std::invalid_argument("nuclear_run: bad dimensions");
  if (!(r > 0.0)) throw std::invalid_argument("nuclear_run: radius must be positive");
  const int d = f.d1 + f.d2;
  const double Lhat = Lhat_override > 0.0 ? Lhat_override : 2.0 * r * f.L;
  const double eta_max = 1.0 / (36.0 * Lhat);
  if (eta <= 0.0) eta = eta_max;
  if (eta > eta_max * (1.0 + 1e-12))
    throw std::invalid_argument("nuclear_run: eta exceeds 1/(36*Lhat) = " + std::to_string(eta_max));

  const int m_floor = static_cast<int>(std::ceil(std::log(4.0 * d / delta)));

  SpectrahedronPoint W = SpectrahedronPoint::uniform(f.d1, f.d2);
  SpectrahedronPoint X = W;
  Mat G = Mat::Zero(d, d);

  Trace trace({"f_value", "m_t", "trace_X", "min_eig_X", "trace_W", "min_eig_W"});
  trace.seed = seed;

  for (int t = 1; t <= T; ++t) {
    const double beta = 2.0 / (t + 1);
    Mat Z = (1.0 - beta) * W.X + beta * X.X;
    Mat grad = f.gradient(2.0 * r * Z.topRightCorner(f.d1, f.d2));
    G -= (eta * t) * embed_gradient(grad);

    const int m_t = m_override > 0 ? m_override : std::max(m_floor, t);
    SpectralExpHalf sp(G);

    auto draw = [&](int j) -> Mat {
      Rng rng(Rng::derive(seed, "psi", static_cast<std::uint64_t>(t) * 2654435761ULL + j));
      Vec u = rng.sphere_vector(d);
      Vec v = sp.apply(u);
      return (v * v.transpose()) / v.squaredNorm();
    };

    Mat sum = Mat::Zero(d, d);
    if (parallelism_hint > 1 && m_t >= 4) {
      // Draws are independent; compute in parallel, reduce in index order.
      std::vector<Mat> results(m_t);
      const int workers = std::min(parallelism_hint, m_t);
      std::vector<std::future<void>> futs;
      futs.reserve(workers);
      for (int w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w]() {
          for (int j = w; j < m_t; j += workers) results[j] = draw(j);
        }));
      }
      for (auto& fu : futs) fu.get();
      for (int j = 0; j < m_t; ++j) sum += results[j];
    } else {
      for (int j = 0; j < m_t; ++j) sum += draw(j);
    }
    X.X = sum / m_t;
    W.X = (1.0 - beta) * W.X + beta * X.X;

    const double fval = f.value(2.0 * r * W.block2());
    trace.add_row(t, {fval, static_cast<double>(m_t), X.trace(), X.min_eigenvalue(), W.trace(), W.min_eigenvalue()});
  }

  NuclearRunResult out;
  out.W_out = 2.0 * r * W.block2();
  out.W_T = W;
  out.trace = std::move(trace);
  return out;
}

}  // namespace fgopt
