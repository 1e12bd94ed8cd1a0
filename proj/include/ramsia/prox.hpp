#pragma once

#include "ramsia/model.hpp"

#include <span>
#include <vector>

namespace ramsia::prox {

// One term coeff * |v - z| of the coordinate penalty.
struct Knot {
  double z = 0.0;
  double coeff = 0.0;
};

enum class ProxCase { Identity, Interval, Knot };

struct ProxOutcome {
  double value = 0.0;
  ProxCase which = ProxCase::Identity;
  // Interval case: number of distinct knots at or below the interval.
  // Knot case: position of the returned knot in sorted order.
  std::size_t index = 0;
};

// Minimizer of h(v) = sum_j coeff_j |v - z_j| + 1/2 (v - x)^2.
//
// Knots are sorted per call and duplicate z-values merged; zero coefficients
// are dropped. Each open interval between consecutive knots yields the
// stationary candidate x - (sum of coeffs below - sum of coeffs above), which
// is accepted only strictly inside its interval. Otherwise x falls in the
// closed band [z_l + S_{l-1}, z_l + S_l] of exactly one knot z_l and the
// minimizer sits on that knot. The two rules tile the real line, so exactly
// one of them fires.
double prox_coordinate(double x, std::span<const Knot> knots);
ProxOutcome prox_coordinate_detailed(double x, std::span<const Knot> knots);

// Coordinate-wise prox of (lam_over_L) * sum_j beta_j ||W_j (v - z_j)||_1,
// with z_0 = 0 implicit. `side_infos` must hold w.num_slots() - 1 vectors.
Vector prox_vector(const Vector& x, const WeightState& w,
                   const std::vector<Vector>& side_infos, double lam_over_L);

// Same as prox_vector, writing into `out` (resized as needed).
void prox_vector_into(const Vector& x, const WeightState& w,
                      const std::vector<Vector>& side_infos, double lam_over_L, Vector& out);

}  // namespace ramsia::prox
