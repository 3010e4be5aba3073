#pragma once

// Reference computations written straight from the loss formulas, sharing no
// code with the library, so tests compare two independent derivations.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "alf/rng.hpp"

namespace oracle {

inline double clip(double t) { return std::max(t, 1e-12); }

/// Scalar loss l(t) of label probability t for the single-argument families.
inline std::function<double(double)> scalar(const std::string& family, double a = 0, double q = 0,
                                            double p = 0) {
  if (family == "mae") return [](double t) { return 2.0 - 2.0 * t; };
  if (family == "ce") return [](double t) { return -std::log(clip(t)); };
  if (family == "gce") return [q](double t) { return (1.0 - std::pow(t, q)) / q; };
  if (family == "agce") {
    return [a, q](double t) { return (std::pow(a + 1.0, q) - std::pow(a + t, q)) / q; };
  }
  if (family == "aul") {
    return [a, p](double t) { return (std::pow(a - t, p) - std::pow(a - 1.0, p)) / p; };
  }
  if (family == "ael") return [a](double t) { return std::exp(-t / a); };
  return {};
}

/// Central-difference gradient of f at x.
inline std::vector<double> central_gradient(const std::function<double(const std::vector<double>&)>& f,
                                            std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// ||a - b|| / max(||b||, floor).
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b,
                             double floor = 1e-8) {
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    norm += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(norm), floor);
}

/// Minimum over real pairs (x, y), x + y <= 1, y > 0, of
/// [l(x) - l(x + y)] / [l(0) - l(y)], scanned in steps of h.
inline double full_transfer_ratio(const std::function<double(double)>& l, double h) {
  const int n = static_cast<int>(std::lround(1.0 / h));
  double best = std::numeric_limits<double>::infinity();
  for (int b = 1; b <= n; ++b) {
    const double y = b * h;
    const double den = l(0.0) - l(y);
    if (den == 0.0) continue;
    for (int c = 0; c + b <= n; ++c) {
      const double x = c * h;
      best = std::min(best, (l(x) - l(std::min(1.0, x + y))) / den);
    }
  }
  return best;
}

/// Random interior point of the k-simplex with every entry >= lo.
inline std::vector<double> interior_point(alf::Rng& rng, std::size_t k, double lo = 0.02) {
  std::vector<double> u(k);
  double total = 0.0;
  for (double& v : u) {
    v = -std::log(1.0 - rng.uniform());
    total += v;
  }
  const double rest = 1.0 - lo * static_cast<double>(k);
  for (double& v : u) v = lo + rest * v / total;
  return u;
}

}  // namespace oracle
