#include "alf/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alf/errors.hpp"
#include "alf/losses.hpp"

namespace alf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct AlphaGrid {
  std::size_t n;
  std::vector<double> loss;  // l(i / n)
};

AlphaGrid make_grid(const LossSpec& spec, double alpha_step) {
  if (!(alpha_step > 0.0 && alpha_step <= 0.5)) {
    throw InvalidInput("alpha step must lie in (0, 0.5]");
  }
  const double count = std::round(1.0 / alpha_step);
  if (std::abs(count * alpha_step - 1.0) > 1e-9) throw InvalidInput("alpha step must divide 1");
  AlphaGrid g{static_cast<std::size_t>(count), {}};
  g.loss.resize(g.n + 1);
  for (std::size_t i = 0; i <= g.n; ++i) {
    g.loss[i] = binary_loss(spec, static_cast<double>(i) / static_cast<double>(g.n));
  }
  return g;
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidInput("eta must lie in [0, 1]");
}

// Minimum of the conditional risk over the grid; restricted keeps only
// alpha on the opposite side of 1/2 from eta.
double grid_min(const AlphaGrid& g, double eta, bool restricted) {
  double best = kInf;
  for (std::size_t i = 0; i <= g.n; ++i) {
    if (restricted) {
      const double side = 2.0 * static_cast<double>(i) - static_cast<double>(g.n);
      if (side * (eta - 0.5) > 0.0) continue;
    }
    best = std::min(best, eta * g.loss[i] + (1.0 - eta) * g.loss[g.n - i]);
  }
  return best;
}

}  // namespace

double conditional_risk(const LossSpec& spec, double eta, double alpha) {
  check_eta(eta);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  return eta * binary_loss(spec, alpha) + (1.0 - eta) * binary_loss(spec, 1.0 - alpha);
}

std::vector<CurvePoint> H_curve(const LossSpec& spec, std::span<const double> eta_grid,
                                double alpha_step) {
  const auto g = make_grid(spec, alpha_step);
  std::vector<CurvePoint> out;
  for (double eta : eta_grid) {
    check_eta(eta);
    out.push_back({eta, grid_min(g, eta, false)});
  }
  return out;
}

std::vector<CurvePoint> H_minus_curve(const LossSpec& spec, std::span<const double> eta_grid,
                                      double alpha_step) {
  const auto g = make_grid(spec, alpha_step);
  std::vector<CurvePoint> out;
  for (double eta : eta_grid) {
    check_eta(eta);
    out.push_back({eta, grid_min(g, eta, true)});
  }
  return out;
}

std::vector<CalibrationRow> calibration_table(const LossSpec& spec,
                                              std::span<const double> eta_grid,
                                              double alpha_step) {
  const auto g = make_grid(spec, alpha_step);
  std::vector<CalibrationRow> out;
  for (double eta : eta_grid) {
    check_eta(eta);
    const double h = grid_min(g, eta, false);
    const double hm = grid_min(g, eta, true);
    out.push_back({eta, h, hm, hm - h});
  }
  return out;
}

std::vector<bool> is_calibrated_numeric(const LossSpec& spec, std::span<const double> eta_grid,
                                        double alpha_step, double margin) {
  std::vector<bool> out;
  for (const auto& row : calibration_table(spec, eta_grid, alpha_step)) {
    out.push_back(row.eta != 0.5 && row.gap > margin);
  }
  return out;
}

int bayes_optimal(double eta) noexcept { return eta > 0.5 ? 1 : 0; }

BinaryInstance::BinaryInstance(std::vector<SupportPoint> points, std::vector<double> alpha)
    : points_(std::move(points)), alpha_(std::move(alpha)) {
  if (points_.empty()) throw InvalidInput("instance needs at least one support point");
  if (points_.size() != alpha_.size()) throw InvalidInput("one alpha per support point required");
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& pt = points_[i];
    if (!(pt.mass >= 0.0) || !std::isfinite(pt.mass)) throw InvalidInput("masses must be >= 0");
    check_eta(pt.eta);
    if (!(alpha_[i] >= 0.0 && alpha_[i] <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
    total += pt.mass;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("masses must sum to 1");
}

BinaryInstance random_binary_instance(Rng& rng, std::size_t max_points) {
  if (max_points == 0) throw InvalidInput("max_points must be >= 1");
  const std::size_t n = 1 + static_cast<std::size_t>(rng.below(max_points));
  std::vector<SupportPoint> points(n);
  std::vector<double> alpha(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    points[i].eta = rng.uniform();
    points[i].mass = rng.uniform() + 1e-3;
    alpha[i] = rng.uniform();
    total += points[i].mass;
  }
  for (auto& pt : points) pt.mass /= total;
  return BinaryInstance(std::move(points), std::move(alpha));
}

BoundReport excess_risk_bound_check(const LossSpec& spec, const BinaryInstance& inst,
                                    double alpha_step) {
  const double spread = binary_loss(spec, 0.0) - binary_loss(spec, 1.0);
  if (spread == 0.0) throw DegenerateLoss("l(0) equals l(1); the bound is undefined");
  const auto g = make_grid(spec, alpha_step);

  double r01 = 0.0;
  double r01_star = 0.0;
  double rl = 0.0;
  double rl_star = 0.0;
  for (std::size_t i = 0; i < inst.points().size(); ++i) {
    const auto [eta, mass] = inst.points()[i];
    const double alpha = inst.alpha()[i];
    const int predicted = alpha > 0.5 ? 1 : 0;
    r01 += mass * (predicted == 1 ? 1.0 - eta : eta);
    r01_star += mass * (bayes_optimal(eta) == 1 ? 1.0 - eta : eta);
    const double own = conditional_risk(spec, eta, alpha);
    rl += mass * own;
    rl_star += mass * std::min(own, grid_min(g, eta, false));
  }
  BoundReport r;
  r.lhs = r01 - r01_star;
  r.rhs = 2.0 * (rl - rl_star) / spread;
  r.holds = r.lhs <= r.rhs + 1e-9;
  return r;
}

}  // namespace alf
