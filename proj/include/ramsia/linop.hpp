#pragma once

#include "ramsia/model.hpp"

#include <cstdint>

namespace ramsia::linop {

struct OperatorStats {
  // Estimate of lambda_max(phi^T phi), already multiplied by the safety factor.
  double spectral_norm_sq = 0.0;
  int power_iters_used = 0;
  bool converged = false;
};

Vector apply(const Matrix& phi, const Vector& v);
Vector apply_transpose(const Matrix& phi, const Vector& u);

// phi^T (phi u - y), the gradient of 1/2 ||phi u - y||^2.
Vector gradient(const Matrix& phi, const Vector& y, const Vector& u);

// Power iteration on phi^T phi from a seeded Gaussian start. The returned
// estimate is the last Rayleigh quotient times `safety`.
OperatorStats estimate_lipschitz(const Matrix& phi, int iters, double safety,
                                 std::uint64_t seed);

}  // namespace ramsia::linop
