#pragma once

#include "ramsia/model.hpp"

#include <vector>

namespace ramsia::weights {

// Intra-SI weights evaluated at x: row j (z_0 = 0) is proportional to
// 1 / (|x_i - z_ji| + epsilon), scaled so the row sums to n.
Matrix update_intra(const Vector& x, const std::vector<Vector>& side_infos, double epsilon);

// Inter-SI weights: beta_j proportional to 1 / (||W_j (x - z_j)||_1 + epsilon),
// normalized onto the simplex. `intra` must already be evaluated at x.
Vector update_inter(const Vector& x, const std::vector<Vector>& side_infos, const Matrix& intra,
                    double epsilon);

// Both levels: intra first, then inter with the new intra.
void refresh(WeightState& state, const Vector& x, const std::vector<Vector>& side_infos,
             double epsilon);

}  // namespace ramsia::weights
