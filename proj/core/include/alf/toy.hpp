#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alf/asymmetry.hpp"
#include "alf/loss_spec.hpp"

namespace alf {

inline constexpr std::size_t kToySteps = 5000;
inline constexpr double kToyLearnRate = 0.1;
inline constexpr double kToyConvergedGrad = 1e-6;

/// Reported p_m thresholds: at or above kToySuccess the dominant coordinate
/// counts as "close to 1", at or below kToyFailure as clearly short of it.
inline constexpr double kToySuccess = 0.95;
inline constexpr double kToyFailure = 0.9;

struct ToyRunResult {
  std::vector<double> final_prob;
  double p_m;                // final_prob at the dominant index
  std::size_t steps_taken;
  bool converged;            // max |gradient| fell below kToyConvergedGrad
  double product;            // (w_m / w_n) * r, NaN when r is undefined
};

/// Gradient descent on z for sum_i w_i L(softmax(z), i), z initialised from a
/// standard normal seeded by seed. Stops early once the gradient vanishes.
/// When trace is non-null the objective before every step and after the last
/// is appended to it. Throws DivergenceError if z becomes non-finite.
ToyRunResult minimize_weighted_loss(const LossSpec& spec, const WeightVector& w,
                                    std::size_t steps, double learn_rate, std::uint64_t seed,
                                    std::vector<double>* trace = nullptr);

/// Weights drawn uniform(0, 1) from seed, after which the largest is reset to
/// weight_ratio times the second largest.
WeightVector random_toy_weights(std::size_t k, double weight_ratio, std::uint64_t seed);

struct SweepRun {
  std::uint64_t seed;
  double p_m;
  bool converged;
};

struct SweepPoint {
  double param;
  double mean_p_m;
  double product;
  std::vector<SweepRun> runs;
};

struct SweepResult {
  std::string param_name;
  std::vector<SweepPoint> points;
  std::optional<double> critical;  // a* where (w_m / w_n) * r = 1
};

/// Runs minimize_weighted_loss for each grid value of param_name (applied to
/// base) and each seed, all on the same weights.
SweepResult sweep_param(const LossSpec& base, const std::string& param_name,
                        std::span<const double> grid, const WeightVector& w, std::size_t steps,
                        double learn_rate, std::span<const std::uint64_t> seeds);

/// As above with weights[s] used for seeds[s]. The critical value is reported
/// only when every weight vector has the same w_m / w_n (to 1e-12 relative).
SweepResult sweep_param(const LossSpec& base, const std::string& param_name,
                        std::span<const double> grid, const std::vector<WeightVector>& weights,
                        std::size_t steps, double learn_rate,
                        std::span<const std::uint64_t> seeds);

/// lo, lo + step, ... up to hi inclusive (rounded to the nearest count).
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace alf
