#include "alf/asymmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "alf/errors.hpp"
#include "alf/losses.hpp"

namespace alf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t grid_count(double step, double max_step) {
  if (!(step > 0.0 && step <= max_step)) {
    throw InvalidInput("grid step must lie in (0, " + std::to_string(max_step) + "]");
  }
  const double n = std::round(1.0 / step);
  if (std::abs(n * step - 1.0) > 1e-9) throw InvalidInput("grid step must divide 1");
  return static_cast<std::size_t>(n);
}

// l(i / n) for i = 0..n.
std::vector<double> tabulate(const LossSpec& spec, std::size_t n) {
  if (!is_single_argument(spec)) {
    throw InvalidInput(std::string(family_name(spec.family())) +
                       " depends on the whole probability vector; no asymmetry ratio");
  }
  std::vector<double> l(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    l[i] = binary_loss(spec, static_cast<double>(i) / static_cast<double>(n));
  }
  return l;
}

bool has_closed_form(Family f) {
  return f == Family::MAE || f == Family::GCE || f == Family::AGCE || f == Family::AUL ||
         f == Family::AEL;
}

bool is_symmetric_family(Family f) {
  return f == Family::NCE || f == Family::NFL || f == Family::NGCE;
}

double product_of(double weight_ratio, double ratio) {
  if (std::isinf(weight_ratio) && ratio > 0.0) return kInf;
  return weight_ratio * ratio;
}

bool certifies(double product) { return product >= 1.0 - kCertifyTolerance; }

// Visits every composition of n into parts.size() non-negative parts.
template <typename F>
void for_each_composition(std::vector<std::size_t>& parts, std::size_t index, std::size_t left,
                          F&& visit) {
  if (index + 1 == parts.size()) {
    parts[index] = left;
    visit(parts);
    return;
  }
  for (std::size_t v = 0; v <= left; ++v) {
    parts[index] = v;
    for_each_composition(parts, index + 1, left - v, visit);
  }
}

}  // namespace

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.size() < 2) throw InvalidInput("weight vector needs k >= 2");
  for (double v : weights_) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("weights must be finite and >= 0");
  }
  dominant_ = static_cast<std::size_t>(
      std::max_element(weights_.begin(), weights_.end()) - weights_.begin());
  const double top = weights_[dominant_];
  bool first = true;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (i == dominant_) continue;
    if (weights_[i] == top) throw InvalidInput("largest weight must be unique");
    if (first || weights_[i] > weights_[runner_up_]) runner_up_ = i;
    first = false;
  }
}

double WeightVector::ratio() const noexcept {
  const double wn = weights_[runner_up_];
  return wn == 0.0 ? kInf : weights_[dominant_] / wn;
}

std::string_view status_name(AsymmetryStatus status) noexcept {
  switch (status) {
    case AsymmetryStatus::asymmetric_certified: return "asymmetric_certified";
    case AsymmetryStatus::not_asymmetric_certified: return "not_asymmetric_certified";
    case AsymmetryStatus::indeterminate: return "indeterminate";
  }
  return "?";
}

std::optional<double> asymmetry_ratio_closed(const LossSpec& spec) {
  const LossParams& p = spec.params();
  switch (spec.family()) {
    case Family::MAE: return 1.0;
    case Family::GCE: return p.q < 1.0 ? 0.0 : 1.0;
    case Family::AGCE: return p.q <= 1.0 ? std::pow(p.a / (p.a + 1.0), 1.0 - p.q) : 1.0;
    case Family::AUL: return p.p >= 1.0 ? std::pow((p.a - 1.0) / p.a, p.p - 1.0) : 1.0;
    case Family::AEL: return std::exp(-1.0 / p.a);
    default: return std::nullopt;
  }
}

double asymmetry_ratio_numeric(const LossSpec& spec, double grid_step) {
  const std::size_t n = grid_count(grid_step, 0.05);
  const auto l = tabulate(spec, n);
  double best = kInf;
  for (std::size_t j = 1; j <= n; ++j) {
    const double den = l[0] - l[j];
    if (den == 0.0) continue;
    for (std::size_t i = 0; i + j <= n; ++i) {
      best = std::min(best, (l[i] - l[i + j]) / den);
    }
  }
  if (std::isinf(best)) throw DegenerateLoss("loss is constant on the grid");
  return best;
}

double upper_ratio_numeric(const LossSpec& spec, double grid_step) {
  const std::size_t n = grid_count(grid_step, 0.05);
  const auto l = tabulate(spec, n);
  double best = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double den = l[0] - l[n - i];
    if (den == 0.0) continue;
    best = std::min(best, (l[i] - l[n]) / den);
  }
  if (std::isinf(best)) throw DegenerateLoss("loss is constant on the grid");
  return best;
}

double local_transfer_ratio(const LossSpec& spec, double grid_step) {
  const std::size_t n = grid_count(grid_step, 0.05);
  const auto l = tabulate(spec, n);
  double best = kInf;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t d = 1; d <= j; ++d) {
      const double den = l[j - d] - l[j];
      if (den == 0.0) continue;
      for (std::size_t i = 0; i + j <= n; ++i) {
        best = std::min(best, (l[i] - l[i + d]) / den);
      }
    }
  }
  if (std::isinf(best)) throw DegenerateLoss("loss is constant on the grid");
  return best;
}

AsymmetryVerdict check_asymmetric_on_weights(const LossSpec& spec, const WeightVector& w,
                                             double grid_step) {
  AsymmetryVerdict v{kNaN, kNaN, w.ratio(), kNaN, AsymmetryStatus::indeterminate};
  const Family f = spec.family();

  if (has_closed_form(f)) {
    v.ratio = *asymmetry_ratio_closed(spec);
    v.upper_ratio = v.ratio;
    v.product = product_of(v.weight_ratio, v.ratio);
    v.status = certifies(v.product) ? AsymmetryStatus::asymmetric_certified
                                    : AsymmetryStatus::not_asymmetric_certified;
    return v;
  }
  if (is_symmetric_family(f)) {
    // The constant-sum argument only pins the minimiser to the vertex for two
    // classes. From k = 3 on, points beside the vertex that push the loss
    // mass onto the smallest weight can do better.
    if (w.size() == 2) v.status = AsymmetryStatus::asymmetric_certified;
    return v;
  }

  const bool single = is_single_argument(spec);
  if (single) {
    v.ratio = asymmetry_ratio_numeric(spec, grid_step);
    v.upper_ratio = upper_ratio_numeric(spec, grid_step);
    v.product = product_of(v.weight_ratio, v.ratio);
  }
  if (f == Family::APL) {
    const auto a = check_asymmetric_on_weights(spec.first(), w, grid_step);
    const auto b = check_asymmetric_on_weights(spec.second(), w, grid_step);
    if (a.status == AsymmetryStatus::asymmetric_certified &&
        b.status == AsymmetryStatus::asymmetric_certified) {
      v.status = AsymmetryStatus::asymmetric_certified;
      return v;
    }
  }
  if (!single) return v;
  if (certifies(v.product)) {
    v.status = AsymmetryStatus::asymmetric_certified;
  } else if (product_of(v.weight_ratio, v.upper_ratio) < 1.0) {
    v.status = AsymmetryStatus::not_asymmetric_certified;
  }
  return v;
}

ArgminResult verify_argmin_brute(const LossSpec& spec, const WeightVector& w, double grid_step) {
  const std::size_t k = w.size();
  if (k > 4) throw InvalidInput("brute-force argmin supports k <= 4");
  if (grid_step < 0.01 - 1e-12) throw InvalidInput("brute-force grid step must be >= 0.01");
  const std::size_t n = grid_count(grid_step, 1.0);
  const double scale = 1.0 / static_cast<double>(n);

  std::vector<std::size_t> parts(k, 0);
  std::vector<double> u(k, 0.0);
  std::vector<std::size_t> best_parts;
  double best = kInf;
  std::vector<double> values;
  for_each_composition(parts, 0, n, [&](const std::vector<std::size_t>& c) {
    for (std::size_t i = 0; i < k; ++i) u[i] = static_cast<double>(c[i]) * scale;
    const double value = weighted_loss(spec, u, w.values());
    values.push_back(value);
    if (value < best) {
      best = value;
      best_parts = c;
    }
  });

  const double slack = 1e-12 * std::max(1.0, std::abs(best));
  const auto near_best = std::count_if(values.begin(), values.end(),
                                       [&](double v) { return v <= best + slack; });

  ArgminResult r;
  r.minimum = best;
  r.tie = near_best > 1;
  r.minimizer.resize(k);
  for (std::size_t i = 0; i < k; ++i) r.minimizer[i] = static_cast<double>(best_parts[i]) * scale;
  r.asymmetric = !r.tie && best_parts[w.dominant_index()] == n;
  return r;
}

double clean_level(const NoiseModel& noise) {
  if (!is_clean_dominant(noise)) {
    throw PreconditionError("noise model is not clean-labels-dominant");
  }
  double level = kInf;
  for (std::size_t i = 0; i < noise.k(); ++i) {
    for (std::size_t j = 0; j < noise.k(); ++j) {
      if (j != i && noise(i, j) > 0.0) level = std::min(level, noise(i, i) / noise(i, j));
    }
  }
  return level;
}

double noise_tolerance_margin(const LossSpec& spec, const NoiseModel& noise) {
  const double c = clean_level(noise);
  if (std::isinf(c)) return kInf;
  const auto closed = asymmetry_ratio_closed(spec);
  return c * (closed ? *closed : asymmetry_ratio_numeric(spec));
}

std::optional<double> critical_parameter(const LossSpec& spec, double weight_ratio) {
  if (!(weight_ratio > 1.0) || std::isinf(weight_ratio)) return std::nullopt;
  const LossParams& p = spec.params();
  switch (spec.family()) {
    case Family::AGCE: {
      if (p.q >= 1.0) return std::nullopt;
      const double t = std::pow(weight_ratio, -1.0 / (1.0 - p.q));
      return t / (1.0 - t);
    }
    case Family::AUL: {
      if (p.p <= 1.0) return std::nullopt;
      const double s = std::pow(weight_ratio, -1.0 / (p.p - 1.0));
      return 1.0 / (1.0 - s);
    }
    case Family::AEL: return 1.0 / std::log(weight_ratio);
    default: return std::nullopt;
  }
}

}  // namespace alf
