#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alf/loss_spec.hpp"
#include "alf/rng.hpp"

namespace alf {

/// eta * l(alpha) + (1 - eta) * l(1 - alpha), with l(t) = binary_loss(spec, t).
double conditional_risk(const LossSpec& spec, double eta, double alpha);

struct CurvePoint {
  double eta;
  double value;
};

/// H(eta): minimum of the conditional risk over alpha = i * alpha_step.
std::vector<CurvePoint> H_curve(const LossSpec& spec, std::span<const double> eta_grid,
                                double alpha_step);

/// H^-(eta): the same minimum restricted to (alpha - 1/2)(eta - 1/2) <= 0.
std::vector<CurvePoint> H_minus_curve(const LossSpec& spec, std::span<const double> eta_grid,
                                      double alpha_step);

struct CalibrationRow {
  double eta;
  double H;
  double H_minus;
  double gap;
};

/// Both curves on one alpha grid, gap = H^- - H.
std::vector<CalibrationRow> calibration_table(const LossSpec& spec,
                                              std::span<const double> eta_grid,
                                              double alpha_step);

/// gap > margin per eta. eta = 1/2 is always false since both minima coincide.
std::vector<bool> is_calibrated_numeric(const LossSpec& spec, std::span<const double> eta_grid,
                                        double alpha_step, double margin);

/// 1 if eta > 1/2 else 0; ties go to class 0.
int bayes_optimal(double eta) noexcept;

struct SupportPoint {
  double eta;
  double mass;
};

/// Finite binary problem with a classifier: alpha[i] is the predicted
/// probability of class 1 at points[i].
class BinaryInstance {
 public:
  /// Throws InvalidInput unless masses are >= 0 and sum to 1 within 1e-9, each
  /// eta and alpha lies in [0, 1], and the lists have equal length.
  BinaryInstance(std::vector<SupportPoint> points, std::vector<double> alpha);

  const std::vector<SupportPoint>& points() const noexcept { return points_; }
  const std::vector<double>& alpha() const noexcept { return alpha_; }

 private:
  std::vector<SupportPoint> points_;
  std::vector<double> alpha_;
};

/// Uniform eta and alpha at 1..max_points support points with random masses.
BinaryInstance random_binary_instance(Rng& rng, std::size_t max_points);

struct BoundReport {
  double lhs;  // R_01(f) - R*_01
  double rhs;  // 2 (R_l(f) - R*_l) / (l(0) - l(1))
  bool holds;  // lhs <= rhs + 1e-9
};

/// Evaluates both sides of the excess-risk bound exactly on the instance.
/// R*_l takes, per point, the smaller of the grid minimum and the classifier's
/// own risk, so it never exceeds the true optimum's grid estimate. Throws
/// DegenerateLoss when l(0) == l(1).
BoundReport excess_risk_bound_check(const LossSpec& spec, const BinaryInstance& inst,
                                    double alpha_step);

}  // namespace alf
