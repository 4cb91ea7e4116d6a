#pragma once

#include <functional>
#include <string>

namespace sspanel::links {

/// How the derivative of the index transform behaves, as declared by the
/// link's constructor. Classification is structural, never estimated from
/// samples of the derivative.
enum class PeriodKind {
  kConstant,     // derivative is a positive constant
  kPeriodic,     // derivative has a finite positive period
  kNonPeriodic,  // neither of the above
};

struct PeriodClass {
  PeriodKind kind = PeriodKind::kNonPeriodic;
  /// Period of the derivative; NaN unless kind == kPeriodic.
  double period = 0.0;
  /// Increment of the transform over one period, g(period) - g(0);
  /// NaN unless kind == kPeriodic.
  double increment = 0.0;
};

/// Error distribution expressed through a strictly increasing transform g:
/// the error cdf is t -> logistic(g(t)) = 1 / (1 + exp(-g(t))).
///
/// Built-in families:
///  - logistic():       g(t) = t. Errors are standard logistic.
///  - periodic_gdot(a): g(t) = a*t + sin(t) with a > 1, so the derivative
///                      a + cos(t) is positive and 2*pi-periodic.
///  - gaussian_tail():  g(t) = log(Phi(t) / (1 - Phi(t))). Errors are
///                      standard normal; the derivative grows without
///                      bound in both tails.
///  - custom(...):      caller-supplied transform with a declared period
///                      class. If no derivative is supplied, a central
///                      finite difference with step cbrt(eps)*max(1,|t|)
///                      (about 6e-6 at unit scale) stands in for it.
class Link {
 public:
  static Link logistic();
  static Link periodic_gdot(double a = 2.0);
  static Link gaussian_tail();
  static Link custom(std::function<double(double)> g,
                     std::function<double(double)> g_dot,
                     PeriodClass declared, std::string label = "custom");

  /// Short human-readable family name ("logistic", "periodic_gdot(a=2)", ...).
  const std::string& label() const { return label_; }

  friend double g_transform(const Link& link, double t);
  friend double g_dot(const Link& link, double t);
  friend double quantile(const Link& link, double p);
  friend PeriodClass classify_period(const Link& link);

 private:
  enum class Kind { kLogistic, kPeriodicGdot, kGaussianTail, kCustom };
  Link() = default;
  Kind kind_ = Kind::kLogistic;
  double a_ = 0.0;  // periodic_gdot slope parameter
  std::function<double(double)> custom_g_;
  std::function<double(double)> custom_gdot_;  // may be empty
  PeriodClass declared_{};
  std::string label_;
};

/// The index transform g evaluated at t.
double g_transform(const Link& link, double t);

/// Derivative of the transform at t. Throws DomainError if the evaluated
/// derivative is not strictly positive (an invalid link).
double g_dot(const Link& link, double t);

/// Error cdf: logistic(g(t)).
double cdf(const Link& link, double t);

/// Inverse of the error cdf on (0, 1). Closed form for the logistic and
/// gaussian-tail families; safeguarded Newton on g otherwise. Throws
/// DomainError for p outside (0, 1).
double quantile(const Link& link, double p);

/// Structural behaviour of the derivative, as declared by the family.
PeriodClass classify_period(const Link& link);

}  // namespace sspanel::links
