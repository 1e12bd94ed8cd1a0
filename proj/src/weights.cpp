#include "ramsia/weights.hpp"

#include <cmath>

namespace ramsia::weights {

namespace {

void check_inputs(const Vector& x, const std::vector<Vector>& side_infos, double epsilon) {
  if (!(epsilon > 0.0)) throw InvariantError("weights: epsilon must be positive");
  for (const Vector& z : side_infos) {
    if (z.size() != x.size()) throw InvariantError("weights: side information length mismatch");
  }
}

// |x - z_j| with z_0 = 0.
Vector residual(const Vector& x, const std::vector<Vector>& side_infos, std::size_t slot) {
  return slot == 0 ? Vector(x.cwiseAbs()) : Vector((x - side_infos[slot - 1]).cwiseAbs());
}

}  // namespace

Matrix update_intra(const Vector& x, const std::vector<Vector>& side_infos, double epsilon) {
  check_inputs(x, side_infos, epsilon);
  const Eigen::Index n = x.size();
  const std::size_t slots = side_infos.size() + 1;
  Matrix intra(static_cast<Eigen::Index>(slots), n);
  for (std::size_t j = 0; j < slots; ++j) {
    const Vector inverse = (residual(x, side_infos, j).array() + epsilon).inverse().matrix();
    intra.row(static_cast<Eigen::Index>(j)) =
        (static_cast<double>(n) / inverse.sum()) * inverse.transpose();
  }
  return intra;
}

Vector update_inter(const Vector& x, const std::vector<Vector>& side_infos, const Matrix& intra,
                    double epsilon) {
  check_inputs(x, side_infos, epsilon);
  const std::size_t slots = side_infos.size() + 1;
  if (intra.rows() != static_cast<Eigen::Index>(slots) || intra.cols() != x.size()) {
    throw InvariantError("update_inter: intra weights do not match input dimensions");
  }
  Vector inverse(static_cast<Eigen::Index>(slots));
  for (std::size_t j = 0; j < slots; ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    const double weighted = intra.row(row).dot(residual(x, side_infos, j));
    inverse(row) = 1.0 / (weighted + epsilon);
  }
  return inverse / inverse.sum();
}

void refresh(WeightState& state, const Vector& x, const std::vector<Vector>& side_infos,
             double epsilon) {
  state.intra = update_intra(x, side_infos, epsilon);
  state.inter = update_inter(x, side_infos, state.intra, epsilon);
}

}  // namespace ramsia::weights
