#include "alf/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alf/errors.hpp"

namespace alf {
namespace {

double floored_log(double t) { return std::log(std::max(t, kProbabilityFloor)); }

bool is_normalized(Family f) {
  return f == Family::NCE || f == Family::NFL || f == Family::NGCE;
}

// The loss as a function of the label probability t for single-argument
// families, and the unnormalised base loss for normalised ones.
double scalar_value(Family f, const LossParams& p, double t) {
  switch (f) {
    case Family::CE:
    case Family::NCE: return -floored_log(t);
    case Family::FL:
    case Family::NFL: return -std::pow(std::max(1.0 - t, 0.0), p.gamma) * floored_log(t);
    case Family::MAE: return 2.0 - 2.0 * t;
    case Family::RCE: return -p.A * (1.0 - t);
    case Family::GCE: return (1.0 - std::pow(t, p.q)) / p.q;
    case Family::NGCE: return 1.0 - std::pow(t, p.q);
    case Family::SCE: return -p.alpha * floored_log(t) - p.beta * p.A * (1.0 - t);
    case Family::AGCE: return (std::pow(p.a + 1.0, p.q) - std::pow(p.a + t, p.q)) / p.q;
    case Family::AUL: return (std::pow(p.a - t, p.p) - std::pow(p.a - 1.0, p.p)) / p.p;
    case Family::AEL: return std::exp(-t / p.a);
    case Family::APL: break;
  }
  return 0.0;
}

// Derivative of scalar_value. Below the probability floor the log terms are
// constant, so their derivative is zero; power terms with a negative exponent
// are evaluated at the floor to stay finite.
double scalar_deriv(Family f, const LossParams& p, double t) {
  const bool floored = t < kProbabilityFloor;
  const double inv = floored ? 0.0 : 1.0 / t;
  const double ts = std::max(t, kProbabilityFloor);
  switch (f) {
    case Family::CE:
    case Family::NCE: return -inv;
    case Family::FL:
    case Family::NFL: {
      const double r = std::max(1.0 - t, 0.0);
      const double focus = (p.gamma == 0.0 || r == 0.0)
                               ? 0.0
                               : p.gamma * std::pow(r, p.gamma - 1.0) * floored_log(t);
      return focus - std::pow(r, p.gamma) * inv;
    }
    case Family::MAE: return -2.0;
    case Family::RCE: return p.A;
    case Family::GCE: return -std::pow(ts, p.q - 1.0);
    case Family::NGCE: return -p.q * std::pow(ts, p.q - 1.0);
    case Family::SCE: return -p.alpha * inv + p.beta * p.A;
    case Family::AGCE: return -std::pow(p.a + t, p.q - 1.0);
    case Family::AUL: return -std::pow(p.a - t, p.p - 1.0);
    case Family::AEL: return -std::exp(-t / p.a) / p.a;
    case Family::APL: break;
  }
  return 0.0;
}

void check_label(std::size_t label, std::size_t k) {
  if (label >= k) {
    throw InvalidInput("label " + std::to_string(label) + " out of range for k = " +
                       std::to_string(k));
  }
}

void check_entries(std::span<const double> u) {
  if (u.size() < 2) throw InvalidInput("need at least 2 classes");
  for (double v : u) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("entries must be finite and >= 0");
  }
}

double value_impl(const LossSpec& spec, std::span<const double> u, std::size_t y) {
  const Family f = spec.family();
  const LossParams& p = spec.params();
  if (f == Family::APL) {
    return p.alpha * value_impl(spec.first(), u, y) + p.beta * value_impl(spec.second(), u, y);
  }
  if (!is_normalized(f)) return scalar_value(f, p, u[y]);
  double total = 0.0;
  for (double t : u) total += scalar_value(f, p, t);
  return scalar_value(f, p, u[y]) / total;
}

// Adds weight * dL(u, y)/du into out.
void accumulate_grad(const LossSpec& spec, std::span<const double> u, std::size_t y,
                     double weight, std::span<double> out) {
  const Family f = spec.family();
  const LossParams& p = spec.params();
  if (f == Family::APL) {
    accumulate_grad(spec.first(), u, y, weight * p.alpha, out);
    accumulate_grad(spec.second(), u, y, weight * p.beta, out);
    return;
  }
  if (!is_normalized(f)) {
    out[y] += weight * scalar_deriv(f, p, u[y]);
    return;
  }
  double total = 0.0;
  for (double t : u) total += scalar_value(f, p, t);
  const double by = scalar_value(f, p, u[y]);
  const double scale = weight / (total * total);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double own = (j == y) ? total : 0.0;
    out[j] += scale * scalar_deriv(f, p, u[j]) * (own - by);
  }
}

// Chain rule through softmax in place: g <- u * (g - <u, g>).
void to_logit_space(std::span<const double> u, std::span<double> g) {
  double dot = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) dot += u[j] * g[j];
  for (std::size_t j = 0; j < u.size(); ++j) g[j] = u[j] * (g[j] - dot);
}

void check_interior(const LossSpec& spec, std::span<const double> u) {
  if (!requires_interior(spec)) return;
  for (double v : u) {
    if (!(v > 0.0)) {
      throw DomainError(std::string(family_name(spec.family())) +
                        " gradient needs every probability > 0");
    }
  }
}

}  // namespace

bool is_single_argument(const LossSpec& spec) noexcept {
  if (spec.family() == Family::APL) {
    return is_single_argument(spec.first()) && is_single_argument(spec.second());
  }
  return !is_normalized(spec.family());
}

bool requires_interior(const LossSpec& spec) noexcept {
  switch (spec.family()) {
    case Family::CE:
    case Family::FL:
    case Family::SCE:
    case Family::GCE:
    case Family::NCE:
    case Family::NFL:
    case Family::NGCE: return true;
    case Family::APL: return requires_interior(spec.first()) || requires_interior(spec.second());
    default: return false;
  }
}

double loss_value(const LossSpec& spec, std::span<const double> u, std::size_t label) {
  check_entries(u);
  check_label(label, u.size());
  return value_impl(spec, u, label);
}

double loss_value(const LossSpec& spec, const ProbVector& u, std::size_t label) {
  return loss_value(spec, u.values(), label);
}

std::vector<double> loss_grad_prob(const LossSpec& spec, std::span<const double> u,
                                   std::size_t label) {
  check_entries(u);
  check_label(label, u.size());
  check_interior(spec, u);
  std::vector<double> g(u.size(), 0.0);
  accumulate_grad(spec, u, label, 1.0, g);
  return g;
}

std::vector<double> loss_grad_prob(const LossSpec& spec, const ProbVector& u,
                                   std::size_t label) {
  return loss_grad_prob(spec, u.values(), label);
}

std::vector<double> loss_grad_logits(const LossSpec& spec, std::span<const double> z,
                                     std::size_t label) {
  std::vector<double> u = softmax(z);
  check_label(label, u.size());
  if (u.size() < 2) throw InvalidInput("need at least 2 classes");
  std::vector<double> g(u.size(), 0.0);
  accumulate_grad(spec, u, label, 1.0, g);
  to_logit_space(u, g);
  return g;
}

std::vector<double> loss_grad_logits(const LossSpec& spec, const Logits& z, std::size_t label) {
  return loss_grad_logits(spec, z.values(), label);
}

double loss_and_grad_logits(const LossSpec& spec, std::span<const double> z, std::size_t label,
                            std::span<double> grad, std::span<double> scratch) {
  softmax_into(z, scratch);
  std::fill(grad.begin(), grad.end(), 0.0);
  accumulate_grad(spec, scratch, label, 1.0, grad);
  to_logit_space(scratch, grad);
  return value_impl(spec, scratch, label);
}

std::vector<double> weighted_grad_logits(const LossSpec& spec, std::span<const double> z,
                                         std::span<const double> weights) {
  std::vector<double> u = softmax(z);
  if (weights.size() != u.size()) throw InvalidInput("weights and logits differ in size");
  std::vector<double> g(u.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (weights[i] != 0.0) accumulate_grad(spec, u, i, weights[i], g);
  }
  to_logit_space(u, g);
  return g;
}

double weighted_loss(const LossSpec& spec, std::span<const double> u,
                     std::span<const double> weights) {
  check_entries(u);
  if (weights.size() != u.size()) throw InvalidInput("weights and probabilities differ in size");
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (weights[i] != 0.0) total += weights[i] * value_impl(spec, u, i);
  }
  return total;
}

double symmetric_sum(const LossSpec& spec, const ProbVector& u) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) total += value_impl(spec, u.values(), i);
  return total;
}

double binary_loss(const LossSpec& spec, double t) {
  const double u[2] = {t, 1.0 - t};
  return loss_value(spec, std::span<const double>(u, 2), 0);
}

}  // namespace alf
