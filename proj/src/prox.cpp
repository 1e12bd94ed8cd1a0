#include "ramsia/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ramsia::prox {

namespace {

// Sorts, merges duplicates and drops zero coefficients in place; returns the
// number of surviving knots.
std::size_t normalize_knots(std::span<Knot> knots) {
  std::size_t live = 0;
  for (const Knot& k : knots) {
    if (k.coeff != 0.0) knots[live++] = k;
  }
  // Small J in practice; insertion sort keeps this allocation free.
  for (std::size_t a = 1; a < live; ++a) {
    const Knot key = knots[a];
    std::size_t b = a;
    while (b > 0 && knots[b - 1].z > key.z) {
      knots[b] = knots[b - 1];
      --b;
    }
    knots[b] = key;
  }
  std::size_t merged = 0;
  for (std::size_t a = 0; a < live; ++a) {
    if (merged > 0 && knots[merged - 1].z == knots[a].z) {
      knots[merged - 1].coeff += knots[a].coeff;
    } else {
      knots[merged++] = knots[a];
    }
  }
  return merged;
}

// `knots` must already be normalized (sorted, distinct, positive coeffs).
ProxOutcome solve_sorted(double x, std::span<const Knot> knots) {
  const std::size_t count = knots.size();
  if (count == 0) return {x, ProxCase::Identity, 0};

  // slope[l] = sum of coeffs of the l lowest knots minus the rest: the
  // penalty's derivative on the interval above the l-th knot.
  double total = 0.0;
  for (const Knot& k : knots) total += k.coeff;
  constexpr std::size_t kInline = 16;
  double inline_slopes[kInline + 1];
  std::vector<double> heap_slopes;
  double* slope = inline_slopes;
  if (count > kInline) {
    heap_slopes.resize(count + 1);
    slope = heap_slopes.data();
  }
  slope[0] = -total;
  double below = 0.0;
  for (std::size_t l = 1; l <= count; ++l) {
    below += knots[l - 1].coeff;
    slope[l] = below - (total - below);
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  // Interval l spans (z_l, z_{l+1}) with z_0 = -inf and z_{count+1} = +inf
  // (1-based knots). The candidate x - slope[l] lies inside it iff
  // z_l + slope[l] < x < z_{l+1} + slope[l].
  for (std::size_t l = 0; l <= count; ++l) {
    const double lower = l == 0 ? -inf : knots[l - 1].z + slope[l];
    const double upper = l == count ? inf : knots[l].z + slope[l];
    if (lower < x && x < upper) return {x - slope[l], ProxCase::Interval, l};
  }
  for (std::size_t l = 1; l <= count; ++l) {
    const double z = knots[l - 1].z;
    if (z + slope[l - 1] <= x && x <= z + slope[l]) return {z, ProxCase::Knot, l - 1};
  }
  // Unreachable for finite input: the bands above partition the real line.
  throw InvariantError("prox_coordinate: no case matched for x = " + std::to_string(x));
}

void check_finite(double x, std::span<const Knot> knots) {
  if (!std::isfinite(x)) throw InvariantError("prox_coordinate: non-finite point");
  for (const Knot& k : knots) {
    if (!std::isfinite(k.z) || !std::isfinite(k.coeff)) {
      throw InvariantError("prox_coordinate: non-finite knot");
    }
    if (k.coeff < 0.0) throw InvariantError("prox_coordinate: negative knot coefficient");
  }
}

}  // namespace

ProxOutcome prox_coordinate_detailed(double x, std::span<const Knot> knots) {
  if (knots.empty()) throw InvariantError("prox_coordinate: empty knot list");
  check_finite(x, knots);
  std::vector<Knot> scratch(knots.begin(), knots.end());
  const std::size_t live = normalize_knots(scratch);
  return solve_sorted(x, std::span<const Knot>(scratch.data(), live));
}

double prox_coordinate(double x, std::span<const Knot> knots) {
  return prox_coordinate_detailed(x, knots).value;
}

void prox_vector_into(const Vector& x, const WeightState& w,
                      const std::vector<Vector>& side_infos, double lam_over_L, Vector& out) {
  if (!(lam_over_L > 0.0)) throw InvariantError("prox_vector: lam_over_L must be positive");
  const std::size_t slots = w.num_slots();
  if (slots != side_infos.size() + 1 || w.intra.rows() != static_cast<Eigen::Index>(slots) ||
      w.intra.cols() != x.size()) {
    throw InvariantError("prox_vector: weight state does not match input dimensions");
  }
  for (const Vector& z : side_infos) {
    if (z.size() != x.size()) throw InvariantError("prox_vector: side information length mismatch");
  }

  out.resize(x.size());
  std::vector<Knot> scratch(slots);
  std::vector<double> scale(slots);
  for (std::size_t j = 0; j < slots; ++j) {
    scale[j] = lam_over_L * w.inter(static_cast<Eigen::Index>(j));
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    scratch[0] = {0.0, scale[0] * w.intra(0, i)};
    for (std::size_t j = 1; j < slots; ++j) {
      scratch[j] = {side_infos[j - 1](i), scale[j] * w.intra(static_cast<Eigen::Index>(j), i)};
    }
    try {
      check_finite(x(i), scratch);
      const std::size_t live = normalize_knots(scratch);
      out(i) = solve_sorted(x(i), std::span<const Knot>(scratch.data(), live)).value;
    } catch (const InvariantError& e) {
      throw InvariantError("prox_vector: coordinate " + std::to_string(i) + ": " + e.what());
    }
  }
}

Vector prox_vector(const Vector& x, const WeightState& w, const std::vector<Vector>& side_infos,
                   double lam_over_L) {
  Vector out;
  prox_vector_into(x, w, side_infos, lam_over_L, out);
  return out;
}

}  // namespace ramsia::prox
