#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "alf/loss_spec.hpp"
#include "alf/noise.hpp"

namespace alf {

/// Non-negative class weights with a unique largest entry.
class WeightVector {
 public:
  /// Throws InvalidInput unless k >= 2, every weight is finite and >= 0, and the
  /// maximum is attained exactly once.
  explicit WeightVector(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const noexcept { return weights_[i]; }
  std::span<const double> values() const noexcept { return weights_; }
  std::size_t dominant_index() const noexcept { return dominant_; }
  std::size_t runner_up_index() const noexcept { return runner_up_; }

  /// w_m / w_n; +infinity when the runner-up weight is zero.
  double ratio() const noexcept;

 private:
  std::vector<double> weights_;
  std::size_t dominant_ = 0;
  std::size_t runner_up_ = 0;
};

enum class AsymmetryStatus { asymmetric_certified, not_asymmetric_certified, indeterminate };

std::string_view status_name(AsymmetryStatus status) noexcept;

struct AsymmetryVerdict {
  double ratio;          // r, NaN when undefined for the family
  double upper_ratio;    // r_u, NaN when undefined
  double weight_ratio;   // w_m / w_n
  double product;        // weight_ratio * ratio
  AsymmetryStatus status;
};

/// Products at or above 1 - kCertifyTolerance certify; absorbs rounding in
/// thresholds such as a = 16/65 that are exact only in real arithmetic.
inline constexpr double kCertifyTolerance = 1e-12;

inline constexpr double kDefaultGridStep = 0.01;

/// Closed-form asymmetry ratio for MAE, GCE, AGCE, AUL and AEL; nullopt for
/// every other family.
std::optional<double> asymmetry_ratio_closed(const LossSpec& spec);

/// Grid infimum of [l(u1) - l(u1 + u2)] / [l(0) - l(u2)] over u1 + u2 <= 1,
/// u2 > 0, moving the whole mass u2 from one coordinate to another. Defined for
/// losses of the form l(u_y) (including APL of such losses); throws
/// InvalidInput otherwise and DegenerateLoss if l is constant on the grid.
double asymmetry_ratio_numeric(const LossSpec& spec, double grid_step = kDefaultGridStep);

/// Grid infimum of [l(u1) - l(1)] / [l(0) - l(u2)] over u1 + u2 = 1.
double upper_ratio_numeric(const LossSpec& spec, double grid_step = kDefaultGridStep);

/// Infimum of [l(u1) - l(u1 + d)] / [l(u2 - d) - l(u2)] over partial transfers
/// 0 < d <= u2. Agrees with asymmetry_ratio_numeric for convex l; for concave
/// l it is smaller than the value the certification thresholds rely on.
double local_transfer_ratio(const LossSpec& spec, double grid_step = kDefaultGridStep);

/// Decides asymmetry of spec on w.
///
/// MAE, GCE, AGCE, AUL and AEL have r = r_u, so the closed-form product gives
/// an exact answer. NCE, NFL and NGCE are certified for k = 2 and left
/// indeterminate otherwise. APL is certified when both children are. Remaining single-argument losses use the
/// grid ratios: r certifies, r_u refutes, anything between is indeterminate.
AsymmetryVerdict check_asymmetric_on_weights(const LossSpec& spec, const WeightVector& w,
                                             double grid_step = kDefaultGridStep);

struct ArgminResult {
  bool asymmetric;               // unique grid minimiser is the dominant vertex
  bool tie;                      // minimum attained at more than one grid point
  std::vector<double> minimizer;
  double minimum;
};

/// Minimises sum_i w_i L(u, i) over every simplex point whose coordinates are
/// multiples of grid_step. Requires k <= 4 and grid_step >= 0.01 dividing 1.
ArgminResult verify_argmin_brute(const LossSpec& spec, const WeightVector& w,
                                 double grid_step = kDefaultGridStep);

/// min over rows i and columns j != i with T[i][j] > 0 of T[i][i] / T[i][j];
/// +infinity when no off-diagonal mass exists. PreconditionError unless the
/// model is clean-labels-dominant.
double clean_level(const NoiseModel& noise);

/// clean_level * r, r closed-form when available. +infinity without noise.
double noise_tolerance_margin(const LossSpec& spec, const NoiseModel& noise);

/// Smallest shift a at which weight_ratio * r reaches 1 for AGCE (q < 1),
/// AUL (p > 1) and AEL. nullopt when r does not depend on a, or when no
/// a reaches the threshold (weight_ratio <= 1).
std::optional<double> critical_parameter(const LossSpec& spec, double weight_ratio);

}  // namespace alf
