#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <variant>

#include "fgopt/objective.hpp"
#include "fgopt/prox.hpp"
#include "fgopt/types.hpp"

namespace fgopt {

/// l(z) = <theta, z>
struct LinearLoss {
  Vec theta;
};

/// l(z) = (mu/2) |z - center|^2 + <lin, z>
struct IsoQuadLoss {
  double mu = 0.0;
  Vec center;
  Vec lin;
};

/// y-player loss of the Fenchel payoff: l(y) = f*(y) - <x, y>.
/// (1/L)-strongly convex when f is L-smooth; the constant comes from the
/// declared smoothness, it is never re-derived.
struct FenchelLoss {
  const Objective* f = nullptr;
  Vec x;
};

/// x-player loss of the composite payoff: h(x) = <x, y> + psi(x) + offset.
/// The offset (-f*(y) in the game) does not move the argmin and cancels in
/// regret differences; it defaults to zero.
struct CompositeLoss {
  Vec y;
  const ProxFunction* psi = nullptr;  // nullptr means plain linear
  double offset = 0.0;
};

using Loss = std::variant<LinearLoss, IsoQuadLoss, FenchelLoss, CompositeLoss>;

inline double loss_value(const Loss& loss, const Vec& z) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, LinearLoss>) {
          return l.theta.dot(z);
        } else if constexpr (std::is_same_v<T, IsoQuadLoss>) {
          return 0.5 * l.mu * (z - l.center).squaredNorm() + l.lin.dot(z);
        } else if constexpr (std::is_same_v<T, FenchelLoss>) {
          return l.f->conjugate(z) - l.x.dot(z);
        } else {
          return l.y.dot(z) + (l.psi ? l.psi->value(z) : 0.0) + l.offset;
        }
      },
      loss);
}

inline Vec loss_gradient(const Loss& loss, const Vec& z) {
  return std::visit(
      [&](const auto& l) -> Vec {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, LinearLoss>) {
          return l.theta;
        } else if constexpr (std::is_same_v<T, IsoQuadLoss>) {
          return l.mu * (z - l.center) + l.lin;
        } else if constexpr (std::is_same_v<T, FenchelLoss>) {
          throw std::runtime_error("FenchelLoss gradient requires the conjugate map; handled analytically");
        } else {
          if (l.psi) throw std::runtime_error("CompositeLoss with psi is non-smooth; use prox paths");
          return l.y;
        }
      },
      loss);
}

inline double loss_strong_convexity(const Loss& loss) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, IsoQuadLoss>) {
          return l.mu;
        } else if constexpr (std::is_same_v<T, FenchelLoss>) {
          const double L = l.f->smoothness();
          return L > 0.0 ? 1.0 / L : 0.0;
        } else {
          return 0.0;
        }
      },
      loss);
}

/// Running closed-form summary of a weighted loss sequence. Supports exact
/// argmin for the shapes the learner menu needs: linear sums over an LMO set,
/// isotropic quadratic sums (optionally ridge-regularized and projected), pure
/// Fenchel sums (resolved through grad f at the weighted average), and
/// composite linear-plus-psi sums.
class LossAccumulator {
 public:
  void add(double w, const Loss& loss) {
    std::visit(
        [&](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, LinearLoss>) {
            add_linear(w, l.theta);
          } else if constexpr (std::is_same_v<T, IsoQuadLoss>) {
            ensure(l.lin.size());
            quad_weight_ += w * l.mu;
            quad_center_sum_ += w * l.mu * l.center;
            add_linear(w, l.lin);
          } else if constexpr (std::is_same_v<T, FenchelLoss>) {
            ensure(l.x.size());
            if (fenchel_f_ && fenchel_f_ != l.f)
              throw std::invalid_argument("loss history mixes different objectives");
            fenchel_f_ = l.f;
            fenchel_weight_ += w;
            fenchel_xsum_ += w * l.x;
          } else {
            ensure(l.y.size());
            if (l.psi) {
              if (psi_ && psi_ != l.psi) throw std::invalid_argument("loss history mixes different psi terms");
              psi_ = l.psi;
              psi_weight_ += w;
            }
            add_linear(w, l.y);
          }
        },
        loss);
  }

  bool empty() const { return dim_ == 0; }
  int dim() const { return dim_; }
  double quad_weight() const { return quad_weight_; }
  const Objective* fenchel_objective() const { return fenchel_f_; }
  double fenchel_weight() const { return fenchel_weight_; }
  /// Weighted average of the x's seen by a Fenchel-loss history.
  Vec fenchel_average() const {
    if (fenchel_weight_ <= 0.0) throw std::runtime_error("no Fenchel losses accumulated");
    return fenchel_xsum_ / fenchel_weight_;
  }

  /// Exact argmin of the accumulated sum plus (ridge/2)|z - ridge_center|^2.
  /// `set` may be null for unconstrained problems.
  Vec argmin(const FeasibleSet* set, double ridge = 0.0, const Vec* ridge_center = nullptr) const {
    if (empty()) {
      if (ridge > 0.0 && ridge_center) return project(set, *ridge_center);
      throw std::runtime_error("argmin of an empty loss history is undefined");
    }
    if (fenchel_f_) {
      if (quad_weight_ != 0.0 || psi_ || ridge != 0.0)
        throw std::runtime_error("Fenchel losses cannot be mixed with quadratic or composite terms");
      // argmin_y sum_s w_s (f*(y) - <x_s, y>) + <theta, y> = grad f((sum w x - theta) / W)
      Vec avg = fenchel_xsum_;
      if (theta_.size()) avg -= theta_;
      return fenchel_f_->gradient(Vec(avg / fenchel_weight_));
    }
    if (psi_) {
      // <theta, z> + psi_weight * psi(z) + (ridge/2)|z - c|^2
      if (quad_weight_ != 0.0) throw std::runtime_error("composite-plus-quadratic sums are not supported");
      if (ridge > 0.0) {
        Vec v = *ridge_center - theta_ / ridge;
        Vec z = psi_->prox(v, psi_weight_ / ridge);
        return z;  // prox domain is unconstrained by construction
      }
      // psi must dominate the linear term for the argmin to exist.
      if (const auto* sq = dynamic_cast<const SquaredL2*>(psi_)) {
        Vec z = -theta_ / (2.0 * psi_weight_ * sq->weight());
        return project(set, z);
      }
      throw std::runtime_error("argmin undefined: composite sum is not coercive");
    }
    const double m = quad_weight_ + ridge;
    if (m > 0.0) {
      Vec num = quad_center_sum_;
      if (ridge > 0.0) num += ridge * (*ridge_center);
      if (theta_.size()) num -= theta_;
      return project(set, Vec(num / m));
    }
    // Pure linear sum: bounded only over a set.
    if (!set) throw std::runtime_error("argmin undefined: linear losses over an unbounded set");
    return set->lmo(theta_.size() ? theta_ : Vec::Zero(dim_));
  }

 private:
  void ensure(Eigen::Index d) {
    if (dim_ == 0) {
      dim_ = static_cast<int>(d);
      theta_ = Vec::Zero(dim_);
      quad_center_sum_ = Vec::Zero(dim_);
      fenchel_xsum_ = Vec::Zero(dim_);
    } else if (d != dim_) {
      throw std::invalid_argument("loss dimension mismatch");
    }
  }

  void add_linear(double w, const Vec& v) {
    ensure(v.size());
    theta_ += w * v;
  }

  static Vec project(const FeasibleSet* set, const Vec& z) {
    if (!set) return z;
    if (set->contains(z)) return z;
    return set->project(z);
  }

  int dim_ = 0;
  Vec theta_;
  double quad_weight_ = 0.0;
  Vec quad_center_sum_;
  const Objective* fenchel_f_ = nullptr;
  double fenchel_weight_ = 0.0;
  Vec fenchel_xsum_;
  const ProxFunction* psi_ = nullptr;
  double psi_weight_ = 0.0;
};

}  // namespace fgopt
