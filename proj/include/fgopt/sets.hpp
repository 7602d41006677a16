#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include <Eigen/SVD>

#include "fgopt/types.hpp"

namespace fgopt {

/// Compact convex feasible set accessed through a linear minimization oracle.
///
/// lmo(v) returns argmin_{x in K} <x, v> with a deterministic tie-break
/// (canonical point when v gives no unique minimizer). Feasibility tests use
/// an absolute tolerance, default 1e-9, to absorb floating-point drift over
/// long runs of convex averaging.
class FeasibleSet {
 public:
  virtual ~FeasibleSet() = default;

  virtual int dim() const = 0;
  virtual Vec lmo(const Vec& v) const = 0;
  virtual bool contains(const Vec& x, double tol = 1e-9) const = 0;
  virtual double diameter_sq() const = 0;  // squared Euclidean diameter D
  virtual Vec canonical_point() const = 0;

  virtual bool has_projection() const { return false; }
  virtual Vec project(const Vec& /*x*/) const { throw std::runtime_error("set has no projection oracle"); }

  /// Strong convexity constant of the set itself (0 if not strongly convex).
  virtual double set_strong_convexity() const { return 0.0; }

  virtual bool has_gauge() const { return false; }
  virtual double gauge(const Vec& /*x*/) const { throw std::runtime_error("set has no gauge oracle"); }
  /// Strong convexity constant of the squared gauge, 0 when not exposed.
  virtual double gauge_sq_strong_convexity() const { return 0.0; }
};

/// Euclidean ball of radius r centered at c. Strongly convex with lambda = 1/r.
class L2Ball final : public FeasibleSet {
 public:
  L2Ball(int dim, double radius, Vec center = Vec())
      : dim_(dim), r_(radius), c_(center.size() ? std::move(center) : Vec::Zero(dim)) {
    if (!(r_ > 0.0)) throw std::invalid_argument("ball radius must be positive");
    if (c_.size() != dim_) throw std::invalid_argument("ball center dimension mismatch");
  }

  int dim() const override { return dim_; }

  Vec lmo(const Vec& v) const override {
    check_dim(v);
    const double n = v.norm();
    if (n < 1e-300) return canonical_point();
    return c_ - (r_ / n) * v;
  }

  bool contains(const Vec& x, double tol = 1e-9) const override { return (x - c_).norm() <= r_ + tol; }
  double diameter_sq() const override { return 4.0 * r_ * r_; }
  Vec canonical_point() const override {
    Vec p = c_;
    p[0] += r_;
    return p;
  }

  bool has_projection() const override { return true; }
  Vec project(const Vec& x) const override {
    const Vec d = x - c_;
    const double n = d.norm();
    return n <= r_ ? x : Vec(c_ + (r_ / n) * d);
  }

  double set_strong_convexity() const override { return 1.0 / r_; }

  bool has_gauge() const override { return c_.isZero(0.0); }
  double gauge(const Vec& x) const override {
    if (!has_gauge()) throw std::runtime_error("gauge defined only for origin-centered balls");
    return x.norm() / r_;
  }
  double gauge_sq_strong_convexity() const override { return has_gauge() ? 2.0 / (r_ * r_) : 0.0; }

  double radius() const { return r_; }
  const Vec& center() const { return c_; }

 private:
  void check_dim(const Vec& v) const {
    if (v.size() != dim_) throw std::invalid_argument("lmo: dimension mismatch");
  }
  int dim_;
  double r_;
  Vec c_;
};

/// Origin-centered l_p ball, p in (1, 2]. Strongly convex with lambda = (p-1)/r.
class LpBall final : public FeasibleSet {
 public:
  LpBall(int dim, double p, double radius) : dim_(dim), p_(p), r_(radius) {
    if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("lp ball: p must lie in (1, 2]");
    if (!(r_ > 0.0)) throw std::invalid_argument("lp ball: radius must be positive");
  }

  int dim() const override { return dim_; }

  Vec lmo(const Vec& v) const override {
    if (v.size() != dim_) throw std::invalid_argument("lmo: dimension mismatch");
    const double q = p_ / (p_ - 1.0);  // dual exponent
    double qnorm = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) qnorm += std::pow(std::abs(v[i]), q);
    qnorm = std::pow(qnorm, 1.0 / q);
    if (qnorm < 1e-300) return canonical_point();
    Vec out(dim_);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double mag = std::pow(std::abs(v[i]) / qnorm, q - 1.0);
      out[i] = -r_ * (v[i] > 0.0 ? mag : (v[i] < 0.0 ? -mag : 0.0));
    }
    return out;
  }

  bool contains(const Vec& x, double tol = 1e-9) const override { return pnorm(x) <= r_ + tol; }
  double diameter_sq() const override { return 4.0 * r_ * r_; }  // |x|_2 <= |x|_p for p <= 2
  Vec canonical_point() const override {
    Vec p = Vec::Zero(dim_);
    p[0] = r_;
    return p;
  }

  double set_strong_convexity() const override { return (p_ - 1.0) / r_; }

  bool has_gauge() const override { return true; }
  double gauge(const Vec& x) const override { return pnorm(x) / r_; }
  double gauge_sq_strong_convexity() const override { return 2.0 * (p_ - 1.0) / (r_ * r_); }

 private:
  double pnorm(const Vec& x) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p_);
    return std::pow(s, 1.0 / p_);
  }
  int dim_;
  double p_, r_;
};

/// Probability simplex. LMO picks the lowest index among minimizing coordinates.
class Simplex final : public FeasibleSet {
 public:
  explicit Simplex(int dim) : dim_(dim) {}

  int dim() const override { return dim_; }

  Vec lmo(const Vec& v) const override {
    if (v.size() != dim_) throw std::invalid_argument("lmo: dimension mismatch");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
      if (v[i] < v[best]) best = i;
    Vec out = Vec::Zero(dim_);
    out[best] = 1.0;
    return out;
  }

  bool contains(const Vec& x, double tol = 1e-9) const override {
    if (x.minCoeff() < -tol) return false;
    return std::abs(x.sum() - 1.0) <= tol;
  }

  double diameter_sq() const override { return 2.0; }
  Vec canonical_point() const override { return lmo(Vec::Zero(dim_)); }

  bool has_projection() const override { return true; }
  Vec project(const Vec& x) const override {
    // Sort-based Euclidean projection.
    std::vector<double> u(x.data(), x.data() + x.size());
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    int rho = 0;
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
      css += u[i];
      const double t = (css - 1.0) / (i + 1);
      if (u[i] - t > 0.0) {
        rho = i + 1;
        theta = t;
      }
    }
    (void)rho;
    Vec out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = std::max(x[i] - theta, 0.0);
    return out;
  }

 private:
  int dim_;
};

/// Nuclear-norm ball of radius r over d1 x d2 matrices, flattened column-major.
/// The LMO computes a dense SVD and returns -r * u1 v1' from the top singular
/// pair (deterministic at the scales this library targets, d <= 200).
class NuclearBall final : public FeasibleSet {
 public:
  NuclearBall(int rows, int cols, double radius) : d1_(rows), d2_(cols), r_(radius) {
    if (!(r_ > 0.0)) throw std::invalid_argument("nuclear ball: radius must be positive");
  }

  int rows() const { return d1_; }
  int cols() const { return d2_; }
  double radius() const { return r_; }

  int dim() const override { return d1_ * d2_; }

  Vec lmo(const Vec& v) const override {
    if (v.size() != dim()) throw std::invalid_argument("lmo: dimension mismatch");
    Eigen::Map<const Mat> G(v.data(), d1_, d2_);
    if (G.cwiseAbs().maxCoeff() < 1e-300) return canonical_point();
    Eigen::JacobiSVD<Mat> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec u = svd.matrixU().col(0);
    const Vec w = svd.matrixV().col(0);
    Mat out = -r_ * u * w.transpose();
    return Eigen::Map<Vec>(out.data(), dim());
  }

  bool contains(const Vec& x, double tol = 1e-9) const override { return nuclear_norm(x) <= r_ + tol; }
  double diameter_sq() const override { return 4.0 * r_ * r_; }

  Vec canonical_point() const override {
    Mat out = Mat::Zero(d1_, d2_);
    out(0, 0) = r_;
    return Eigen::Map<Vec>(out.data(), dim());
  }

  double nuclear_norm(const Vec& x) const {
    Eigen::Map<const Mat> W(x.data(), d1_, d2_);
    Eigen::JacobiSVD<Mat> svd(W);
    return svd.singularValues().sum();
  }

 private:
  int d1_, d2_;
  double r_;
};

inline double gauge_eval(const FeasibleSet& set, const Vec& x) {
  if (!set.has_gauge()) throw std::runtime_error("gauge_eval: set does not expose a gauge");
  return set.gauge(x);
}

}  // namespace fgopt
