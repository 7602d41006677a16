#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>

#include "fgopt/types.hpp"

namespace fgopt {

/// Componentwise soft threshold: argmin_x lam*|x|_1 + 1/2 |x - v|^2.
inline Vec prox_l1(const Vec& v, double lam) {
  if (lam < 0.0) throw std::invalid_argument("prox_l1: lambda must be nonnegative");
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) - lam;
    out[i] = a > 0.0 ? (v[i] > 0.0 ? a : -a) : 0.0;
  }
  return out;
}

/// Simple convex term psi with an exact proximal map
/// prox_{lam psi}(v) = argmin_x psi(x) + (1/(2 lam)) |x - v|^2.
class ProxFunction {
 public:
  virtual ~ProxFunction() = default;
  virtual double value(const Vec& x) const = 0;
  virtual Vec prox(const Vec& v, double lam) const = 0;
};

class L1Norm final : public ProxFunction {
 public:
  explicit L1Norm(double weight = 1.0) : w_(weight) {}
  double value(const Vec& x) const override { return w_ * x.lpNorm<1>(); }
  Vec prox(const Vec& v, double lam) const override { return prox_l1(v, lam * w_); }

 private:
  double w_;
};

class SquaredL2 final : public ProxFunction {
 public:
  explicit SquaredL2(double weight = 0.5) : w_(weight) {}  // w * |x|^2
  double value(const Vec& x) const override { return w_ * x.squaredNorm(); }
  Vec prox(const Vec& v, double lam) const override { return v / (1.0 + 2.0 * lam * w_); }
  double weight() const { return w_; }

 private:
  double w_;
};

class ZeroFunction final : public ProxFunction {
 public:
  double value(const Vec&) const override { return 0.0; }
  Vec prox(const Vec& v, double) const override { return v; }
};

}  // namespace fgopt
