#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>

#include "sspanel/links.hpp"

namespace sspanel::dgp {

/// How the regressor difference W = X1 - X0 is drawn.
enum class RegressorKind {
  /// Two components, each independent uniform on (-1, 1).
  kUniformExample,
  /// First k-1 components drawn from a bounded uniform law; the last
  /// component is the constant 1 (a time dummy differenced across periods).
  kChamberlain,
};

/// Bounded uniform law for the free components of the Chamberlain design.
struct ZLaw {
  double lo = -1.0;
  double hi = 1.0;
};

enum class FixedEffectKind { kNormal, kLocationShift, kCustom };

/// Distribution of the individual effect alpha given the regressors.
struct FixedEffectLaw {
  FixedEffectKind kind = FixedEffectKind::kNormal;
  double mean = 0.0;  // kNormal
  double sd = 1.0;    // noise scale for kNormal and kLocationShift
  /// kLocationShift: alpha = shift'(w/2) + sd * standard normal; w/2 is
  /// the per-row average of the two period regressors (period 0 sits at
  /// the origin).
  Eigen::VectorXd shift;
  /// kCustom: receives the row w and one standard-normal draw from the
  /// row's dedicated substream, returns alpha.
  std::function<double(const Eigen::VectorXd& w, double z)> custom;

  static FixedEffectLaw normal(double mean = 0.0, double sd = 1.0);
  static FixedEffectLaw location_shift(Eigen::VectorXd shift, double sd);
  static FixedEffectLaw custom_law(
      std::function<double(const Eigen::VectorXd&, double)> fn);
};

struct PanelDesign {
  int k = 2;
  Eigen::VectorXd beta;
  RegressorKind regressors = RegressorKind::kUniformExample;
  ZLaw z_law{};  // Chamberlain only
  FixedEffectLaw fe{};
  links::Link link = links::Link::logistic();
};

/// One simulated panel: rows are observations, y_t the period-t outcomes,
/// d = y1 - y0 componentwise.
struct PanelSample {
  Eigen::MatrixXd w;
  Eigen::VectorXi y0;
  Eigen::VectorXi y1;
  Eigen::VectorXi d;
  int n() const { return static_cast<int>(w.rows()); }
  int k() const { return static_cast<int>(w.cols()); }
};

/// Design with beta = (1, beta2) and two independent uniform(-1,1)
/// regressor differences.
PanelDesign uniform_example_design(
    double beta2, links::Link link = links::Link::logistic(),
    FixedEffectLaw fe = FixedEffectLaw::normal());

/// Design with W = (Z', 1)': bounded uniform Z plus a constant final
/// component.
PanelDesign chamberlain_design(Eigen::VectorXd beta, ZLaw z_law = {},
                               links::Link link = links::Link::logistic(),
                               FixedEffectLaw fe = FixedEffectLaw::normal());

/// Draws n independent rows: regressors and alpha per the design, then
/// y_t = 1{x_t'beta + alpha >= u_t} with u_0, u_1 i.i.d. from the link's
/// error distribution. Every variate comes from a substream keyed by
/// (seed, row, variate tag), so the output is a pure function of
/// (design, n, seed) regardless of evaluation order.
PanelSample simulate(const PanelDesign& design, long long n,
                     std::uint64_t seed);

/// CSV round-trip: header w_1,...,w_k,y0,y1; 17-significant-digit reals.
std::string to_csv(const PanelSample& sample);
PanelSample from_csv(const std::string& text);

}  // namespace sspanel::dgp
