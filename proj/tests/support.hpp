#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "divpath/laplacian.hpp"
#include "divpath/mesh.hpp"

namespace divpath::testing {

inline int nearest_vertex(const TriMesh& mesh, const Vec2& p) {
  int best = 0;
  double bd = 1e300;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double d = (mesh.vertex(v) - p).squaredNorm();
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  return best;
}

inline std::vector<int> random_interior(const TriMesh& mesh, int count, std::mt19937& rng) {
  const auto& pool = mesh.interior_vertices();
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<int> out;
  while (static_cast<int>(out.size()) < count) {
    const int v = pool[pick(rng)];
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

// Interior pairs at least min_sep apart.
inline std::vector<std::pair<int, int>> random_pairs(const TriMesh& mesh, int count, double min_sep,
                                                     std::mt19937& rng) {
  const auto& pool = mesh.interior_vertices();
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<std::pair<int, int>> out;
  while (static_cast<int>(out.size()) < count) {
    const int a = pool[pick(rng)], b = pool[pick(rng)];
    if ((mesh.vertex(a) - mesh.vertex(b)).norm() >= min_sep) out.emplace_back(a, b);
  }
  return out;
}

// Moore-Penrose pseudo-inverse of K = -Lc through a symmetric
// eigendecomposition, dropping the null direction.
inline Eigen::MatrixXd laplacian_pinv(const LaplacianSet& ls) {
  const Eigen::MatrixXd K = -Eigen::MatrixXd(ls.Lc());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double cut = 1e-10 * lam.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lam.size());
  for (int i = 0; i < lam.size(); ++i) {
    if (std::abs(lam[i]) > cut) inv[i] = 1.0 / lam[i];
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<long>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace divpath::testing
