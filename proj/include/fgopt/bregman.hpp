#pragma once

#include <memory>
#include <stdexcept>

#include "fgopt/types.hpp"

namespace fgopt {

/// Distance generating function phi with its Bregman divergence
/// V_c(x) = phi(x) - <grad phi(c), x - c> - phi(c).
class BregmanGeometry {
 public:
  virtual ~BregmanGeometry() = default;

  virtual double phi(const Vec& x) const = 0;
  virtual Vec grad_phi(const Vec& x) const = 0;
  virtual double strong_convexity() const = 0;  // beta
  /// Smoothness of phi when declared (used by the linear-rate pairing).
  virtual double smoothness() const { return 0.0; }

  double divergence(const Vec& c, const Vec& x) const {
    return phi(x) - grad_phi(c).dot(x - c) - phi(c);
  }

  /// Inverse mirror map: solve grad phi(x) = g. Required by mirror steps.
  virtual Vec grad_phi_inverse(const Vec& /*g*/) const {
    throw std::runtime_error("Bregman geometry has no inverse mirror map");
  }
};

/// phi(x) = 1/2 |x|^2: beta = 1, L_phi = 1, divergence is half squared distance.
class SquaredEuclidean final : public BregmanGeometry {
 public:
  double phi(const Vec& x) const override { return 0.5 * x.squaredNorm(); }
  Vec grad_phi(const Vec& x) const override { return x; }
  double strong_convexity() const override { return 1.0; }
  double smoothness() const override { return 1.0; }
  Vec grad_phi_inverse(const Vec& g) const override { return g; }
};

}  // namespace fgopt
