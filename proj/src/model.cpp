#include "ramsia/model.hpp"

#include <algorithm>
#include <cmath>

namespace ramsia {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what);
}

bool all_finite(const Eigen::Ref<const Vector>& v) { return v.allFinite(); }

}  // namespace

ProblemInstance::ProblemInstance(Matrix phi, Vector y, std::vector<Vector> side_infos,
                                 std::optional<Vector> x_true)
    : phi_(std::move(phi)),
      y_(std::move(y)),
      side_infos_(std::move(side_infos)),
      x_true_(std::move(x_true)) {
  require(phi_.rows() >= 1 && phi_.cols() >= 1, "measurement matrix must be non-empty");
  require(y_.size() == phi_.rows(),
          "measurement length " + std::to_string(y_.size()) + " does not match " +
              std::to_string(phi_.rows()) + " matrix rows");
  require(phi_.allFinite() && all_finite(y_), "measurements must be finite");
  for (std::size_t j = 0; j < side_infos_.size(); ++j) {
    require(side_infos_[j].size() == phi_.cols(),
            "side information " + std::to_string(j + 1) + " has length " +
                std::to_string(side_infos_[j].size()) + ", expected " +
                std::to_string(phi_.cols()));
    require(all_finite(side_infos_[j]), "side information must be finite");
  }
  if (x_true_) {
    require(x_true_->size() == phi_.cols(), "x_true length does not match matrix columns");
    const double mismatch = (phi_ * *x_true_ - y_).norm() / std::max(1.0, y_.norm());
    require(mismatch <= 1e-12,
            "inconsistent instance: ||phi x - y|| / max(1, ||y||) = " + std::to_string(mismatch));
  }
}

ProblemInstance ProblemInstance::with_side_infos(std::size_t count) const {
  require(count <= side_infos_.size(), "requested more side information than available");
  std::vector<Vector> kept(side_infos_.begin(), side_infos_.begin() + count);
  return ProblemInstance(phi_, y_, std::move(kept), x_true_);
}

WeightState WeightState::initial(std::size_t num_side_infos, Eigen::Index n) {
  WeightState w;
  w.intra = Matrix::Zero(static_cast<Eigen::Index>(num_side_infos) + 1, n);
  w.inter = Vector::Zero(static_cast<Eigen::Index>(num_side_infos) + 1);
  w.intra.row(0).setOnes();
  w.inter(0) = 1.0;
  return w;
}

WeightState WeightState::l1_l1(std::size_t num_side_infos, Eigen::Index n) {
  require(num_side_infos >= 1, "l1-l1 weighting needs at least one side information");
  WeightState w = initial(num_side_infos, n);
  w.intra.row(1).setOnes();
  w.inter(1) = 1.0;
  return w;
}

WeightState WeightState::uniform(std::size_t num_side_infos, Eigen::Index n) {
  WeightState w;
  w.intra = Matrix::Ones(static_cast<Eigen::Index>(num_side_infos) + 1, n);
  w.inter = Vector::Ones(static_cast<Eigen::Index>(num_side_infos) + 1);
  return w;
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::PlainL1: return "plain_l1";
    case Variant::L1L1: return "l1_l1";
    case Variant::Ramsia: return "ramsia";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "plain_l1" || name == "fista" || name == "l1") return Variant::PlainL1;
  if (name == "l1_l1" || name == "l1l1") return Variant::L1L1;
  if (name == "ramsia") return Variant::Ramsia;
  throw InvariantError("unknown solver variant '" + std::string(name) + "'");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::ToleranceReached: return "tolerance_reached";
    case Termination::MaxIters: return "max_iters";
    case Termination::Stalled: return "stalled";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  require(lambda > 0 && std::isfinite(lambda), "lambda must be positive");
  require(epsilon > 0 && std::isfinite(epsilon), "epsilon must be positive");
  require(stop_tol > 0, "stop_tol must be positive");
  require(max_iters >= 1, "max_iters must be at least 1");
  if (const auto* explicit_l = std::get_if<double>(&lipschitz)) {
    require(*explicit_l > 0 && std::isfinite(*explicit_l), "explicit Lipschitz constant must be positive");
  } else {
    const auto& p = std::get<PowerIterationSettings>(lipschitz);
    require(p.iterations >= 1, "power iteration needs at least one step");
    require(p.safety >= 1.0, "power iteration safety factor must be >= 1");
  }
}

double weighted_penalty(const WeightState& w, const std::vector<Vector>& side_infos,
                        const Vector& x) {
  require(w.num_slots() == side_infos.size() + 1,
          "weight state has " + std::to_string(w.num_slots()) + " slots for " +
              std::to_string(side_infos.size()) + " side informations");
  require(w.intra.rows() == w.inter.size() && w.intra.cols() == x.size(),
          "weight state dimension mismatch");
  double total = w.inter(0) * w.intra.row(0).dot(x.cwiseAbs());
  for (std::size_t j = 0; j < side_infos.size(); ++j) {
    const auto slot = static_cast<Eigen::Index>(j + 1);
    if (w.inter(slot) == 0.0) continue;
    total += w.inter(slot) * w.intra.row(slot).dot((x - side_infos[j]).cwiseAbs());
  }
  return total;
}

double objective_value(const ProblemInstance& inst, const WeightState& w,
                       const SolverConfig& cfg, const Vector& x) {
  require(x.size() == inst.cols(), "x length does not match matrix columns");
  const double fidelity = 0.5 * (inst.phi() * x - inst.y()).squaredNorm();
  return fidelity + cfg.lambda * weighted_penalty(w, inst.side_infos(), x);
}

}  // namespace ramsia
