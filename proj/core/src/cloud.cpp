#include "coopemit/cloud.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "coopemit/errors.hpp"
#include "coopemit/random.hpp"

namespace coopemit {

void CloudParams::validate() const {
  std::ostringstream msg;
  if (n_atoms < 1) msg << "n_atoms must be >= 1 (got " << n_atoms << "); ";
  if (!(k0 > 0.0) || !std::isfinite(k0)) msg << "k0 must be positive and finite; ";
  if (!(r0 > 0.0) || !std::isfinite(r0)) msg << "r0 must be positive and finite; ";
  if (!(gamma1 > 0.0) || !std::isfinite(gamma1)) msg << "gamma1 must be positive and finite; ";
  if (!n0.allFinite() || std::abs(n0.norm() - 1.0) > 1e-12) msg << "n0 must be a unit vector; ";
  const std::string text = msg.str();
  if (!text.empty()) throw ParameterError("invalid cloud parameters: " + text.substr(0, text.size() - 2));
}

AtomicCloud::AtomicCloud(CloudParams params, std::vector<Vec3> positions)
    : params_(std::move(params)), positions_(std::move(positions)) {
  params_.validate();
  if (static_cast<int>(positions_.size()) != params_.n_atoms) {
    throw ParameterError("cloud holds " + std::to_string(positions_.size()) + " positions but n_atoms = " +
                         std::to_string(params_.n_atoms));
  }
  for (const auto& r : positions_)
    if (!r.allFinite()) throw ParameterError("cloud positions must be finite");
}

Eigen::VectorXd AtomicCloud::forward_phases() const {
  Eigen::VectorXd out(size());
  const Vec3 k = params_.k0 * params_.n0;
  for (int j = 0; j < size(); ++j) out[j] = k.dot(position(j));
  return out;
}

double AtomicCloud::max_extent() const {
  double best = 0.0;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) best = std::max(best, (position(i) - position(j)).squaredNorm());
  return std::sqrt(best);
}

AtomicCloud sample_cloud(const CloudParams& params) {
  params.validate();
  const double sigma = params.r0 * std::numbers::sqrt2 * 0.5;
  GaussianStream rng(params.seed);
  std::vector<Vec3> positions(static_cast<std::size_t>(params.n_atoms));
  for (auto& r : positions) {
    const double x = rng.standard_normal();
    const double y = rng.standard_normal();
    const double z = rng.standard_normal();
    r = Vec3(x * sigma, y * sigma, z * sigma);
  }
  return AtomicCloud(params, std::move(positions));
}

Eigen::MatrixXd pair_distances(const AtomicCloud& cloud) {
  const int n = cloud.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      d(i, j) = (cloud.position(i) - cloud.position(j)).norm();
      d(j, i) = d(i, j);
    }
  }
  return d;
}

void write_positions_csv(const AtomicCloud& cloud, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "x,y,z\n";
  for (const auto& r : cloud.positions()) out << r.x() << ',' << r.y() << ',' << r.z() << '\n';
  out.precision(old_precision);
}

}  // namespace coopemit
