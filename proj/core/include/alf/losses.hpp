#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alf/loss_spec.hpp"
#include "alf/prob.hpp"

namespace alf {

/// Probabilities are floored at this value before any logarithm.
inline constexpr double kProbabilityFloor = 1e-12;

/// L(u, y) for a validated simplex point.
double loss_value(const LossSpec& spec, const ProbVector& u, std::size_t label);

/// L(u, y) evaluated from the formula at an arbitrary non-negative vector,
/// without the simplex check. Finite-difference probes step off the simplex
/// and go through here.
double loss_value(const LossSpec& spec, std::span<const double> u, std::size_t label);

/// dL/du componentwise. Log-based families (CE, FL, SCE, GCE, NCE, NFL, NGCE
/// and combinations containing them) need every entry > 0 and raise DomainError
/// otherwise.
std::vector<double> loss_grad_prob(const LossSpec& spec, const ProbVector& u, std::size_t label);

/// Off-simplex variant of loss_grad_prob, same domain rules.
std::vector<double> loss_grad_prob(const LossSpec& spec, std::span<const double> u,
                                   std::size_t label);

/// dL(softmax(z), y)/dz.
std::vector<double> loss_grad_logits(const LossSpec& spec, const Logits& z, std::size_t label);
std::vector<double> loss_grad_logits(const LossSpec& spec, std::span<const double> z,
                                     std::size_t label);

/// Fused value and logit gradient for the training loop. Writes into grad
/// (size k); scratch must also have size k. Returns L(softmax(z), y).
double loss_and_grad_logits(const LossSpec& spec, std::span<const double> z, std::size_t label,
                            std::span<double> grad, std::span<double> scratch);

/// sum_i w_i dL(softmax(z), i)/dz for a weight vector w of size k.
std::vector<double> weighted_grad_logits(const LossSpec& spec, std::span<const double> z,
                                         std::span<const double> weights);

/// sum_i w_i L(u, i).
double weighted_loss(const LossSpec& spec, std::span<const double> u,
                     std::span<const double> weights);

/// sum_{i=1..k} L(u, i).
double symmetric_sum(const LossSpec& spec, const ProbVector& u);

/// True when L(u, i) depends on u only through u_i, i.e. L(u, i) = l(u_i).
bool is_single_argument(const LossSpec& spec) noexcept;

/// True when the gradient needs strictly positive probabilities.
bool requires_interior(const LossSpec& spec) noexcept;

/// Scalar form l(t) = L((t, 1 - t), 0) on the binary simplex.
double binary_loss(const LossSpec& spec, double t);

}  // namespace alf
