#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "fgopt/momentum.hpp"
#include "fgopt/rng.hpp"
#include "fgopt/trace.hpp"
#include "fgopt/types.hpp"

namespace fgopt {

// Two training testbeds whose residual dynamics follow the heavy-ball
// recursion with a fixed curvature matrix: a wide one-layer ReLU net (kernel
// Gram matrix) and a deep linear net under orthogonal initialization.

/// One-hidden-layer ReLU network, squared loss, second layer fixed.
/// Activation convention: an input counts as active at exactly zero.
class ReluNet {
 public:
  /// Data: columns of X are unit-norm samples; labels y. Weights are drawn
  /// N(0, I), signs Rademacher, both from the given seed.
  ReluNet(int m, Mat X, Vec y, std::uint64_t seed) : m_(m), X_(std::move(X)), y_(std::move(y)) {
    d_ = static_cast<int>(X_.rows());
    n_ = static_cast<int>(X_.cols());
    Rng rng(Rng::derive(seed, "relu-init"));
    W_ = rng.gaussian_matrix(d_, m_);
    W0_ = W_;
    a_ = Vec(m_);
    for (int r = 0; r < m_; ++r) a_[r] = rng.next_double() < 0.5 ? -1.0 : 1.0;
  }

  int samples() const { return n_; }
  int width() const { return m_; }
  const Mat& weights() const { return W_; }
  void set_weights(Mat W) {
    if (W.rows() != d_ || W.cols() != m_) throw std::invalid_argument("weight shape mismatch");
    W_ = std::move(W);
  }

  /// Network outputs on the training samples: u[i] = (1/sqrt m) sum_r a_r relu(<w_r, x_i>).
  Vec forward() const {
    Vec u = Vec::Zero(n_);
    const Mat Z = W_.transpose() * X_;  // m x n pre-activations
    for (int i = 0; i < n_; ++i)
      for (int r = 0; r < m_; ++r)
        if (Z(r, i) >= 0.0) u[i] += a_[r] * Z(r, i);
    return u / std::sqrt(static_cast<double>(m_));
  }

  double loss() const {
    Vec u = forward();
    return 0.5 * (y_ - u).squaredNorm();
  }

  /// Co-activation Gram matrix H(W)_{ij} = (1/m) x_i'x_j #{r active on both}.
  Mat gram() const {
    Mat act(m_, n_);
    const Mat Z = W_.transpose() * X_;
    for (int i = 0; i < n_; ++i)
      for (int r = 0; r < m_; ++r) act(r, i) = Z(r, i) >= 0.0 ? 1.0 : 0.0;
    Mat H(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j <= i; ++j) {
        const double c = act.col(i).dot(act.col(j));
        H(i, j) = H(j, i) = X_.col(i).dot(X_.col(j)) * c / m_;
      }
    return H;
  }

  /// Fraction of (sample, neuron) activation patterns that differ from the
  /// initialization.
  double pattern_change_fraction() const {
    const Mat Z = W_.transpose() * X_;
    const Mat Z0 = W0_.transpose() * X_;
    int changed = 0;
    for (int i = 0; i < n_; ++i)
      for (int r = 0; r < m_; ++r)
        if ((Z(r, i) >= 0.0) != (Z0(r, i) >= 0.0)) ++changed;
    return static_cast<double>(changed) / (static_cast<double>(m_) * n_);
  }

  /// Subgradient of the squared loss with respect to the first layer.
  Mat subgradient() const {
    const Vec u = forward();
    const Vec resid = u - y_;  // d loss / d u
    Mat grad = Mat::Zero(d_, m_);
    const Mat Z = W_.transpose() * X_;
    const double s = 1.0 / std::sqrt(static_cast<double>(m_));
    for (int i = 0; i < n_; ++i)
      for (int r = 0; r < m_; ++r)
        if (Z(r, i) >= 0.0) grad.col(r) += s * resid[i] * a_[r] * X_.col(i);
    return grad;
  }

  /// Heavy-ball training of the first layer. Trace: loss, residual norm and
  /// activation-pattern-change fraction.
  Trace train(double eta, double beta, int T) {
    Trace trace({"loss", "residual_norm", "pattern_change"});
    Mat W_prev = W_;
    for (int t = 1; t <= T; ++t) {
      Mat g = subgradient();
      Mat W_next = W_ - eta * g + beta * (W_ - W_prev);
      W_prev = W_;
      W_ = W_next;
      const Vec u = forward();
      trace.add_row(t, {0.5 * (y_ - u).squaredNorm(), (u - y_).norm(), pattern_change_fraction()});
    }
    return trace;
  }

  const Vec& labels() const { return y_; }

 private:
  int m_, d_ = 0, n_ = 0;
  Mat X_;
  Vec y_;
  Mat W_, W0_;
  Vec a_;
};

/// Deep linear network N(x) = c W_L ... W_1 x, c = 1/sqrt(m^(L-1) d_y),
/// trained on Y = W* X under scaled orthogonal initialization.
class DeepLinearNet {
 public:
  DeepLinearNet(int depth, int m, int d_in, int d_out, std::uint64_t seed)
      : L_(depth), m_(m), d_in_(d_in), d_out_(d_out) {
    if (m_ < std::max(d_in_, d_out_))
      throw std::invalid_argument("deep linear net: width must be >= max(d_in, d_out)");
    Rng rng(Rng::derive(seed, "dln-init"));
    layers_.resize(L_);
    const double sm = std::sqrt(static_cast<double>(m_));
    layers_[0] = sm * orthonormal_columns(rng.gaussian_matrix(m_, d_in_));
    for (int l = 1; l < L_ - 1; ++l) layers_[l] = sm * orthonormal_columns(rng.gaussian_matrix(m_, m_));
    layers_[L_ - 1] = sm * orthonormal_columns(rng.gaussian_matrix(m_, d_out_)).transpose();
    scale_ = 1.0 / std::sqrt(std::pow(static_cast<double>(m_), L_ - 1) * d_out_);
  }

  int depth() const { return L_; }
  const Mat& layer(int l) const { return layers_[l]; }

  Mat forward(const Mat& X) const {
    Mat Z = X;
    for (const Mat& W : layers_) Z = W * Z;
    return scale_ * Z;
  }

  /// Heavy-ball training on data (X, Y). Trace: Frobenius residual,
  /// stacked residual |(xi_t, xi_{t-1})| and relative stacked residual.
  Trace train(const Mat& X, const Mat& Y, double eta, double beta, int T) {
    Trace trace({"residual", "stacked_residual", "stacked_relative"});
    std::vector<Mat> momenta(L_);
    std::vector<Mat> prefixes(L_ + 1), suffixes(L_ + 1);
    for (int l = 0; l < L_; ++l) momenta[l] = Mat::Zero(layers_[l].rows(), layers_[l].cols());

    Mat U = forward(X);
    double resid_prev = (U - Y).norm();
    const double stacked0 = std::sqrt(2.0) * resid_prev;  // xi_{-1} = xi_0

    for (int t = 1; t <= T; ++t) {
      // prefixes[l] = W_l ... W_1 X (prefixes[0] = X); suffixes[l] = W_L ... W_{l+1}
      prefixes[0] = X;
      for (int l = 0; l < L_; ++l) prefixes[l + 1] = layers_[l] * prefixes[l];
      suffixes[L_] = Mat::Identity(d_out_, d_out_);
      for (int l = L_ - 1; l >= 0; --l) suffixes[l] = suffixes[l + 1] * layers_[l];
      // suffixes[l+1] = product of layers above layer l
      const Mat R = scale_ * prefixes[L_] - Y;
      // Buffer form of the momentum update; equivalent to the two-point form
      // from a cold start (W_{-1} = W_0, M_{-1} = 0).
      for (int l = 0; l < L_; ++l) {
        Mat grad = scale_ * suffixes[l + 1].transpose() * R * prefixes[l].transpose();
        momenta[l] = beta * momenta[l] + grad;
      }
      for (int l = 0; l < L_; ++l) layers_[l] -= eta * momenta[l];

      U = forward(X);
      const double resid = (U - Y).norm();
      if (!std::isfinite(resid)) throw std::runtime_error("deep linear: non-finite residual at t=" + std::to_string(t));
      const double stacked = std::sqrt(resid * resid + resid_prev * resid_prev);
      trace.add_row(t, {resid, stacked, stacked / stacked0});
      resid_prev = resid;
    }
    return trace;
  }

  static Mat orthonormal_columns(const Mat& G) {
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ() * Mat::Identity(G.rows(), G.cols());
    Mat Rfull = qr.matrixQR().topRows(G.cols()).triangularView<Eigen::Upper>();
    // Fix signs so the factorization (and hence the init) is unique.
    for (int j = 0; j < G.cols(); ++j)
      if (Rfull(j, j) < 0.0) Q.col(j) = -Q.col(j);
    return Q;
  }

 private:
  int L_, m_, d_in_, d_out_;
  double scale_ = 1.0;
  std::vector<Mat> layers_;
};

}  // namespace fgopt
