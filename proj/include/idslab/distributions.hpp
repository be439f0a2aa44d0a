#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "idslab/rng.hpp"

namespace idslab {

/// Compactly supported coupling distributions. Uniform and triangular have
/// bounded densities; the triangular one is absolutely continuous with a
/// piecewise-linear density and is the default choice for metric variables.
/// The two-point law is for stress tests and for pinning fields to constants.
class DistributionSpec {
 public:
  enum class Kind { Uniform, Triangular, TwoPoint };

  static DistributionSpec uniform(double a, double b) {
    require(a < b, "uniform: requires a < b");
    return DistributionSpec(Kind::Uniform, a, b, 0.0);
  }

  static DistributionSpec triangular(double a, double b) {
    require(a < b, "triangular: requires a < b");
    return DistributionSpec(Kind::Triangular, a, b, 0.0);
  }

  /// P(X = x0) = p, P(X = x1) = 1 - p.
  static DistributionSpec two_point(double p, double x0, double x1) {
    require(p >= 0.0 && p <= 1.0, "two_point: p outside [0,1]");
    return DistributionSpec(Kind::TwoPoint, x0, x1, p);
  }

  /// Point mass at c.
  static DistributionSpec constant(double c) { return two_point(1.0, c, c); }

  Kind kind() const { return kind_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  double param_p() const { return p_; }

  /// Draw from a single uniform key (inverse CDF).
  double sample(std::uint64_t key) const {
    const double u = uniform01(key);
    switch (kind_) {
      case Kind::Uniform:
        return a_ + (b_ - a_) * u;
      case Kind::Triangular: {
        // symmetric triangle on [a, b]
        if (u < 0.5) return a_ + (b_ - a_) * std::sqrt(u / 2.0);
        return b_ - (b_ - a_) * std::sqrt((1.0 - u) / 2.0);
      }
      case Kind::TwoPoint:
        return u < p_ ? a_ : b_;
    }
    return 0.0;  // unreachable
  }

  double mean() const {
    switch (kind_) {
      case Kind::Uniform:
      case Kind::Triangular:
        return 0.5 * (a_ + b_);
      case Kind::TwoPoint:
        return p_ * a_ + (1.0 - p_) * b_;
    }
    return 0.0;
  }

  double variance() const {
    const double w = b_ - a_;
    switch (kind_) {
      case Kind::Uniform:
        return w * w / 12.0;
      case Kind::Triangular:
        return w * w / 24.0;
      case Kind::TwoPoint: {
        const double m = mean();
        return p_ * (a_ - m) * (a_ - m) + (1.0 - p_) * (b_ - m) * (b_ - m);
      }
    }
    return 0.0;
  }

  double support_min() const {
    if (kind_ == Kind::TwoPoint) {
      if (p_ >= 1.0) return a_;
      if (p_ <= 0.0) return b_;
      return std::min(a_, b_);
    }
    return a_;
  }

  double support_max() const {
    if (kind_ == Kind::TwoPoint) {
      if (p_ >= 1.0) return a_;
      if (p_ <= 0.0) return b_;
      return std::max(a_, b_);
    }
    return b_;
  }

  /// True when every draw returns the same value.
  bool is_deterministic() const {
    return kind_ == Kind::TwoPoint && (p_ == 0.0 || p_ == 1.0 || a_ == b_);
  }

  friend bool operator==(const DistributionSpec& x, const DistributionSpec& y) {
    return x.kind_ == y.kind_ && x.a_ == y.a_ && x.b_ == y.b_ && x.p_ == y.p_;
  }
  friend bool operator!=(const DistributionSpec& x, const DistributionSpec& y) {
    return !(x == y);
  }

  std::string kind_name() const {
    switch (kind_) {
      case Kind::Uniform:
        return "uniform";
      case Kind::Triangular:
        return "triangular";
      case Kind::TwoPoint:
        return "two_point";
    }
    return "?";
  }

 private:
  DistributionSpec(Kind k, double a, double b, double p) : kind_(k), a_(a), b_(b), p_(p) {}

  static void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  }

  Kind kind_;
  double a_;
  double b_;
  double p_;
};

}  // namespace idslab
