#include "alf/toy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alf/errors.hpp"
#include "alf/losses.hpp"
#include "alf/prob.hpp"
#include "alf/rng.hpp"

namespace alf {
namespace {

double ratio_or_nan(const LossSpec& spec) {
  if (const auto closed = asymmetry_ratio_closed(spec)) return *closed;
  if (!is_single_argument(spec)) return std::numeric_limits<double>::quiet_NaN();
  return asymmetry_ratio_numeric(spec);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

ToyRunResult minimize_weighted_loss(const LossSpec& spec, const WeightVector& w,
                                    std::size_t steps, double learn_rate, std::uint64_t seed,
                                    std::vector<double>* trace) {
  if (steps < 1) throw InvalidInput("steps must be >= 1");
  if (!(learn_rate > 0.0) || !std::isfinite(learn_rate)) {
    throw InvalidInput("learn rate must be positive");
  }
  const std::size_t k = w.size();
  Rng rng(seed);
  std::vector<double> z(k);
  for (double& v : z) v = rng.normal();

  std::vector<double> u(k);
  std::size_t taken = 0;
  bool converged = false;
  while (taken < steps) {
    if (trace != nullptr) {
      softmax_into(z, u);
      trace->push_back(weighted_loss(spec, u, w.values()));
    }
    const auto g = weighted_grad_logits(spec, z, w.values());
    if (max_abs(g) < kToyConvergedGrad) {
      converged = true;
      break;
    }
    for (std::size_t i = 0; i < k; ++i) z[i] -= learn_rate * g[i];
    ++taken;
    for (double v : z) {
      if (!std::isfinite(v)) throw DivergenceError("toy descent produced non-finite logits", taken);
    }
  }
  softmax_into(z, u);
  if (trace != nullptr) trace->push_back(weighted_loss(spec, u, w.values()));
  if (!converged) converged = max_abs(weighted_grad_logits(spec, z, w.values())) < kToyConvergedGrad;

  ToyRunResult r;
  r.p_m = u[w.dominant_index()];
  r.final_prob = std::move(u);
  r.steps_taken = taken;
  r.converged = converged;
  const double ratio = ratio_or_nan(spec);
  r.product = std::isinf(w.ratio()) ? std::numeric_limits<double>::infinity() : w.ratio() * ratio;
  return r;
}

WeightVector random_toy_weights(std::size_t k, double weight_ratio, std::uint64_t seed) {
  if (k < 2) throw InvalidInput("toy weights need k >= 2");
  if (!(weight_ratio > 1.0) || !std::isfinite(weight_ratio)) {
    throw InvalidInput("weight ratio must be finite and > 1");
  }
  Rng rng(seed);
  std::vector<double> w(k);
  for (double& v : w) v = rng.uniform();
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  w[order[0]] = weight_ratio * w[order[1]];
  return WeightVector(std::move(w));
}

SweepResult sweep_param(const LossSpec& base, const std::string& param_name,
                        std::span<const double> grid, const WeightVector& w, std::size_t steps,
                        double learn_rate, std::span<const std::uint64_t> seeds) {
  return sweep_param(base, param_name, grid, std::vector<WeightVector>(seeds.size(), w), steps,
                     learn_rate, seeds);
}

SweepResult sweep_param(const LossSpec& base, const std::string& param_name,
                        std::span<const double> grid, const std::vector<WeightVector>& weights,
                        std::size_t steps, double learn_rate,
                        std::span<const std::uint64_t> seeds) {
  if (grid.empty()) throw InvalidInput("sweep grid is empty");
  if (seeds.empty()) throw InvalidInput("sweep needs at least one seed");
  if (weights.size() != seeds.size()) throw InvalidInput("need one weight vector per seed");
  if (!base.param(param_name)) {
    throw InvalidInput(std::string(family_name(base.family())) + " has no parameter '" +
                       param_name + "'");
  }
  SweepResult out;
  out.param_name = param_name;
  const bool same_ratio = std::all_of(weights.begin(), weights.end(), [&](const WeightVector& w) {
    return std::abs(w.ratio() - weights.front().ratio()) <= 1e-12 * w.ratio();
  });
  if (param_name == "a" && same_ratio) {
    out.critical = critical_parameter(base, weights.front().ratio());
  }
  for (double value : grid) {
    const LossSpec spec = base.with_param(param_name, value);
    SweepPoint pt;
    pt.param = value;
    double total = 0.0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const auto run = minimize_weighted_loss(spec, weights[s], steps, learn_rate, seeds[s]);
      pt.runs.push_back({seeds[s], run.p_m, run.converged});
      pt.product = run.product;
      total += run.p_m;
    }
    pt.mean_p_m = total / static_cast<double>(seeds.size());
    out.points.push_back(std::move(pt));
  }
  return out;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidInput("grid needs lo <= hi and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

}  // namespace alf
