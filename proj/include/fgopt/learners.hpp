#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fgopt/bregman.hpp"
#include "fgopt/losses.hpp"
#include "fgopt/rng.hpp"
#include "fgopt/sets.hpp"
#include "fgopt/types.hpp"

namespace fgopt {

// Weighted online learners. Each round the caller asks for an action via
// act(alpha, current_loss, hint) and afterwards reveals the actual loss via
// observe(alpha, loss). Prescient strategies (the "+" family and BestResp)
// read current_loss; optimistic strategies read the hint; the rest ignore
// both. Sub-problem argmins are exact for the closed-form loss shapes in
// losses.hpp, per-round, so the regret lemmas hold numerically.

class Learner {
 public:
  explicit Learner(const FeasibleSet* set = nullptr) : set_(set) {}
  virtual ~Learner() = default;

  virtual Vec act(double alpha, const Loss* current_loss = nullptr, const Loss* hint = nullptr) = 0;

  virtual void observe(double alpha, Loss loss) {
    if (!(alpha > 0.0)) throw std::invalid_argument("round weights must be positive");
    acc_.add(alpha, loss);
    history_.emplace_back(alpha, std::move(loss));
  }

  /// Sum_t alpha_t l_t(z_t) - Sum_t alpha_t l_t(comparator).
  double weighted_regret(const Vec& comparator) const {
    if (history_.size() != actions_.size()) throw std::runtime_error("regret: unobserved rounds pending");
    double reg = 0.0;
    for (std::size_t i = 0; i < history_.size(); ++i) {
      const auto& [alpha, loss] = history_[i];
      reg += alpha * (loss_value(loss, actions_[i]) - loss_value(loss, comparator));
    }
    return reg;
  }

  double cumulative_weighted_loss() const {
    double s = 0.0;
    for (std::size_t i = 0; i < history_.size(); ++i) s += history_[i].first * loss_value(history_[i].second, actions_[i]);
    return s;
  }

  /// Minimizer of the observed weighted loss sum (the regret comparator for
  /// the y-player convention).
  Vec loss_sum_argmin() const { return acc_.argmin(set_); }

  const std::vector<Vec>& actions() const { return actions_; }
  const FeasibleSet* decision_set() const { return set_; }
  int rounds() const { return static_cast<int>(actions_.size()); }

 protected:
  Vec record(Vec z) {
    actions_.push_back(z);
    return z;
  }

  const FeasibleSet* set_;
  LossAccumulator acc_;
  std::vector<std::pair<double, Loss>> history_;
  std::vector<Vec> actions_;
};

/// Follow The Leader: argmin of the weighted history; a supplied initial
/// point is played on round one.
class Ftl : public Learner {
 public:
  Ftl(const FeasibleSet* set, Vec z_init) : Learner(set), z_init_(std::move(z_init)) {}

  Vec act(double, const Loss* = nullptr, const Loss* = nullptr) override {
    if (history_.empty()) return record(z_init_);
    return record(acc_.argmin(set_));
  }

 private:
  Vec z_init_;
};

/// FTL+ (Be The Leader): prescient, includes the current round in the argmin.
class FtlPlus : public Learner {
 public:
  explicit FtlPlus(const FeasibleSet* set) : Learner(set) {}

  Vec act(double alpha, const Loss* current_loss, const Loss* = nullptr) override {
    if (!current_loss) throw std::invalid_argument("FTL+ is prescient: current loss required");
    LossAccumulator trial = acc_;
    trial.add(alpha, *current_loss);
    return record(trial.argmin(set_));
  }
};

/// OptimisticFTL: argmin of history plus a weighted hint for the coming loss.
class OptimisticFtl : public Learner {
 public:
  explicit OptimisticFtl(const FeasibleSet* set, std::optional<Vec> z_init = std::nullopt)
      : Learner(set), z_init_(std::move(z_init)) {}

  Vec act(double alpha, const Loss* = nullptr, const Loss* hint = nullptr) override {
    if (!hint) {
      if (history_.empty()) {
        if (z_init_) return record(*z_init_);
        throw std::invalid_argument("OptimisticFTL: empty history and no hint");
      }
      return record(acc_.argmin(set_));
    }
    LossAccumulator trial = acc_;
    trial.add(alpha, *hint);
    return record(trial.argmin(set_));
  }

 private:
  std::optional<Vec> z_init_;
};

/// FTRL / FTRL+ / OptimisticFTRL with quadratic regularizer
/// R(z) = 1/2 |z - z0|^2 scaled by 1/eta. `prescient` selects FTRL+.
class Ftrl : public Learner {
 public:
  Ftrl(const FeasibleSet* set, double eta, Vec z0, bool prescient)
      : Learner(set), eta_(eta), z0_(std::move(z0)), prescient_(prescient) {
    if (!(eta > 0.0)) throw std::invalid_argument("FTRL: eta must be positive");
  }

  Vec act(double alpha, const Loss* current_loss, const Loss* hint = nullptr) override {
    LossAccumulator trial = acc_;
    if (prescient_) {
      if (!current_loss) throw std::invalid_argument("FTRL+ is prescient: current loss required");
      trial.add(alpha, *current_loss);
    } else if (hint) {
      trial.add(alpha, *hint);
    }
    return record(trial.argmin(set_, 1.0 / eta_, &z0_));
  }

  const Vec& regularizer_center() const { return z0_; }
  double eta() const { return eta_; }

 private:
  double eta_;
  Vec z0_;
  bool prescient_;
};

/// Best response: per-round minimizer of the current loss alone.
/// Weighted regret is never positive.
class BestResp : public Learner {
 public:
  explicit BestResp(const FeasibleSet* set) : Learner(set) {}

  Vec act(double alpha, const Loss* current_loss, const Loss* = nullptr) override {
    if (!current_loss) throw std::invalid_argument("BestResp is prescient: current loss required");
    LossAccumulator one;
    one.add(alpha, *current_loss);
    return record(one.argmin(set_));
  }
};

/// Prescient mirror descent: argmin alpha*l(z) + (1/gamma) V_{z_prev}(z).
class OmdPlus : public Learner {
 public:
  OmdPlus(const FeasibleSet* set, std::shared_ptr<const BregmanGeometry> geometry, double gamma, Vec z_start)
      : Learner(set), geom_(std::move(geometry)), gamma_(gamma), z_prev_(std::move(z_start)) {
    if (!(gamma > 0.0)) throw std::invalid_argument("OMD+: gamma must be positive");
    if (!geom_) throw std::invalid_argument("OMD+: geometry required");
  }

  Vec act(double alpha, const Loss* current_loss, const Loss* = nullptr) override {
    if (!current_loss) throw std::invalid_argument("OMD+ is prescient: current loss required");
    z_prev_ = step(alpha, *current_loss);
    return record(z_prev_);
  }

  const Vec& previous_action() const { return z_prev_; }

 private:
  Vec step(double alpha, const Loss& loss) const {
    const bool euclidean = dynamic_cast<const SquaredEuclidean*>(geom_.get()) != nullptr;
    if (const auto* comp = std::get_if<CompositeLoss>(&loss); comp && comp->psi) {
      if (!euclidean) throw std::runtime_error("OMD+ composite step requires the Euclidean geometry");
      // prox-gradient step: prox_{alpha*gamma*psi}(z - alpha*gamma*y)
      Vec z = comp->psi->prox(z_prev_ - alpha * gamma_ * comp->y, alpha * gamma_);
      return set_ && !set_->contains(z) ? set_->project(z) : z;
    }
    if (euclidean) {
      LossAccumulator one;
      one.add(alpha, loss);
      return one.argmin(set_, 1.0 / gamma_, &z_prev_);
    }
    // General mirror map, linear losses only.
    const auto* lin = std::get_if<LinearLoss>(&loss);
    if (!lin) throw std::runtime_error("OMD+ with a non-Euclidean geometry supports linear losses only");
    Vec z = geom_->grad_phi_inverse(geom_->grad_phi(z_prev_) - gamma_ * alpha * lin->theta);
    return set_ && !set_->contains(z) ? set_->project(z) : z;
  }

  std::shared_ptr<const BregmanGeometry> geom_;
  double gamma_;
  Vec z_prev_;
};

/// Follow the Perturbed Leader: Monte-Carlo average over Gaussian
/// perturbations of the perturbed FTL argmin. noise_scale = 0 reduces to FTL.
class Ftpl : public Learner {
 public:
  Ftpl(const FeasibleSet* set, Vec z_init, double noise_scale, int n_samples, std::uint64_t seed)
      : Learner(set), z_init_(std::move(z_init)), scale_(noise_scale), n_(n_samples), seed_(seed) {
    if (n_ < 1) throw std::invalid_argument("FTPL: n_samples must be >= 1");
    if (scale_ < 0.0) throw std::invalid_argument("FTPL: noise scale must be nonnegative");
  }

  Vec act(double, const Loss* = nullptr, const Loss* = nullptr) override {
    if (history_.empty()) return record(z_init_);
    if (scale_ == 0.0) return record(acc_.argmin(set_));
    const int round = rounds() + 1;
    Vec sum = Vec::Zero(z_init_.size());
    for (int j = 0; j < n_; ++j) {
      Rng rng(Rng::derive(seed_, "ftpl", static_cast<std::uint64_t>(round) * 1000003ULL + j));
      LossAccumulator trial = acc_;
      trial.add(1.0, Loss(LinearLoss{scale_ * rng.gaussian_vector(static_cast<int>(z_init_.size()))}));
      sum += trial.argmin(set_);
    }
    return record(Vec(sum / n_));
  }

 private:
  Vec z_init_;
  double scale_;
  int n_;
  std::uint64_t seed_;
};

/// Online (projected) gradient descent, non-prescient. Used by the
/// online-to-batch conversion.
class OnlineGradientDescent : public Learner {
 public:
  OnlineGradientDescent(const FeasibleSet* set, double gamma, Vec z_start)
      : Learner(set), gamma_(gamma), z_(std::move(z_start)) {
    if (!(gamma > 0.0)) throw std::invalid_argument("OGD: gamma must be positive");
  }

  Vec act(double, const Loss* = nullptr, const Loss* = nullptr) override { return record(z_); }

  void observe(double alpha, Loss loss) override {
    Vec g = loss_gradient(loss, z_);
    z_ -= gamma_ * alpha * g;
    if (set_ && !set_->contains(z_)) z_ = set_->project(z_);
    Learner::observe(alpha, std::move(loss));
  }

 private:
  double gamma_;
  Vec z_;
};

/// Uniform average of a learner's iterates against a stream of sample losses.
inline Vec online_to_batch(Learner& learner, const std::vector<Loss>& sample_losses) {
  if (sample_losses.empty()) throw std::invalid_argument("online_to_batch: empty loss stream");
  Vec sum;
  for (const auto& loss : sample_losses) {
    Vec z = learner.act(1.0, &loss, nullptr);
    learner.observe(1.0, loss);
    if (sum.size() == 0)
      sum = z;
    else
      sum += z;
  }
  return sum / static_cast<double>(sample_losses.size());
}

}  // namespace fgopt
