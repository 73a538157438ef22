#pragma once

#include <vector>

#include "coopemit/cloud.hpp"

namespace testing_support {

inline coopemit::AtomicCloud cloud_at(std::vector<coopemit::Vec3> positions, double r0 = 1.0) {
  coopemit::CloudParams p;
  p.n_atoms = static_cast<int>(positions.size());
  p.r0 = r0;
  return coopemit::AtomicCloud(p, std::move(positions));
}

inline coopemit::AtomicCloud gaussian(int n, double k0r0, std::uint64_t seed) {
  coopemit::CloudParams p;
  p.n_atoms = n;
  p.r0 = k0r0;
  p.seed = seed;
  return coopemit::sample_cloud(p);
}

}  // namespace testing_support
