#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgopt {

/// Round-weight schedule alpha_1, alpha_2, ... with cumulative sums A_t.
///
/// Kinds:
///   uniform               alpha_t = 1
///   linear                alpha_t = t
///   exponential(theta)    alpha_t / A_t = theta for t >= 2 (geometric growth)
///   adaptive              weights realized at run time (alpha_t = 1 / |grad|^2,
///                         capped); query before push() is an error
///   custom                explicit sequence
class WeightSchedule {
 public:
  enum class Kind { uniform, linear, exponential, adaptive_inverse_grad_sq, custom };

  static WeightSchedule uniform() { return WeightSchedule(Kind::uniform); }
  static WeightSchedule linear() { return WeightSchedule(Kind::linear); }

  /// Exponential schedule with alpha_t / A_t = theta (t >= 2) and alpha_1 given.
  static WeightSchedule exponential(double theta, double alpha1 = 1.0) {
    if (theta <= 0.0 || theta >= 1.0) throw std::invalid_argument("exponential schedule needs theta in (0,1)");
    WeightSchedule w(Kind::exponential);
    w.theta_ = theta;
    w.alpha1_ = alpha1;
    return w;
  }

  static WeightSchedule adaptive_inverse_grad_sq() { return WeightSchedule(Kind::adaptive_inverse_grad_sq); }

  static WeightSchedule custom(std::vector<double> alphas) {
    WeightSchedule w(Kind::custom);
    for (double a : alphas) {
      if (!(a > 0.0)) throw std::invalid_argument("custom weights must be positive");
      w.push(a);
    }
    return w;
  }

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }

  /// alpha(t), t >= 1.
  double alpha(int t) const {
    if (t < 1) throw std::invalid_argument("weight index starts at 1");
    switch (kind_) {
      case Kind::uniform: return 1.0;
      case Kind::linear: return static_cast<double>(t);
      case Kind::exponential:
        if (t == 1) return alpha1_;
        // A_t = alpha1 / (1-theta)^(t-1); alpha_t = theta * A_t.
        return theta_ * alpha1_ / std::pow(1.0 - theta_, t - 1);
      default: return realized_alpha(t);
    }
  }

  /// A_t = sum_{s<=t} alpha(s); A_0 = 0.
  double cum(int t) const {
    if (t < 0) throw std::invalid_argument("cumulative weight index must be >= 0");
    if (t == 0) return 0.0;
    switch (kind_) {
      case Kind::uniform: return static_cast<double>(t);
      case Kind::linear: return 0.5 * static_cast<double>(t) * static_cast<double>(t + 1);
      case Kind::exponential: return alpha1_ / std::pow(1.0 - theta_, t - 1);
      default: {
        if (static_cast<std::size_t>(t) > cum_.size()) throw std::runtime_error("weight not realized yet");
        return cum_[t - 1];
      }
    }
  }

  bool is_adaptive() const { return kind_ == Kind::adaptive_inverse_grad_sq; }

  /// Record a realized weight (adaptive/custom kinds).
  void push(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("weights must be positive");
    realized_.push_back(alpha);
    cum_.push_back((cum_.empty() ? 0.0 : cum_.back()) + alpha);
  }

  std::string kind_name() const {
    switch (kind_) {
      case Kind::uniform: return "uniform";
      case Kind::linear: return "linear";
      case Kind::exponential: return "exponential";
      case Kind::adaptive_inverse_grad_sq: return "adaptive_inverse_grad_sq";
      case Kind::custom: return "custom";
    }
    return "?";
  }

 private:
  explicit WeightSchedule(Kind k) : kind_(k) {}

  double realized_alpha(int t) const {
    if (static_cast<std::size_t>(t) > realized_.size()) throw std::runtime_error("weight not realized yet");
    return realized_[t - 1];
  }

  Kind kind_;
  double theta_ = 0.0;
  double alpha1_ = 1.0;
  std::vector<double> realized_;
  std::vector<double> cum_;
};

}  // namespace fgopt
