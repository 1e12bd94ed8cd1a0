#include "ramsia/linop.hpp"

#include <cmath>
#include <random>
#include <string>

namespace ramsia::linop {

namespace {

void check(bool ok, const char* what) {
  if (!ok) throw InvariantError(what);
}

}  // namespace

Vector apply(const Matrix& phi, const Vector& v) {
  check(v.size() == phi.cols(), "apply: vector length does not match matrix columns");
  return phi * v;
}

Vector apply_transpose(const Matrix& phi, const Vector& u) {
  check(u.size() == phi.rows(), "apply_transpose: vector length does not match matrix rows");
  return phi.transpose() * u;
}

Vector gradient(const Matrix& phi, const Vector& y, const Vector& u) {
  check(y.size() == phi.rows(), "gradient: measurement length does not match matrix rows");
  check(u.size() == phi.cols(), "gradient: point length does not match matrix columns");
  const Vector residual = phi * u - y;
  return phi.transpose() * residual;
}

OperatorStats estimate_lipschitz(const Matrix& phi, int iters, double safety,
                                 std::uint64_t seed) {
  check(iters >= 1, "estimate_lipschitz: need at least one iteration");
  check(safety >= 1.0, "estimate_lipschitz: safety factor must be >= 1");
  check(phi.size() > 0, "estimate_lipschitz: empty matrix");
  if (phi.cwiseAbs().maxCoeff() == 0.0) {
    throw InvariantError("estimate_lipschitz: zero matrix has no valid step size");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(phi.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  v.normalize();

  OperatorStats stats;
  double rayleigh = 0.0;
  double previous = 0.0;
  Vector image(phi.rows());
  Vector next(phi.cols());
  for (int k = 0; k < iters; ++k) {
    image.noalias() = phi * v;
    next.noalias() = phi.transpose() * image;
    previous = rayleigh;
    rayleigh = v.dot(next);
    stats.power_iters_used = k + 1;
    const double norm = next.norm();
    if (norm == 0.0) break;  // start vector in the null space
    v = next / norm;
  }
  if (!(rayleigh > 0.0) || !std::isfinite(rayleigh)) {
    throw InvariantError("estimate_lipschitz: power iteration produced a non-positive estimate");
  }
  stats.converged = std::abs(rayleigh - previous) <= 1e-9 * rayleigh;
  stats.spectral_norm_sq = rayleigh * safety;
  return stats;
}

}  // namespace ramsia::linop
