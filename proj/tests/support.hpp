#pragma once

#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "logschro/graph.hpp"

namespace support {

inline logschro::Field random_field(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0)
{
  std::uniform_real_distribution<double> dist(lo, hi);
  logschro::Field u(n);
  for (int i = 0; i < n; ++i)
    u[i] = dist(rng);
  return u;
}

inline logschro::Field positive_field(std::mt19937_64& rng, int n)
{
  return random_field(rng, n, 0.1, 1.5);
}

// Dense A - D for a lattice box, assembled from coordinates alone.  Exterior
// neighbors of a Dirichlet box still count in D.
inline Eigen::MatrixXd lattice_laplacian_matrix(const std::vector<int>& sides, bool torus)
{
  const int dim = static_cast<int>(sides.size());
  int n = 1;
  for (int s : sides)
    n *= s;
  auto index = [&](const std::vector<int>& c) {
    int idx = 0;
    for (int a = 0; a < dim; ++a)
      idx = idx * sides[a] + c[a];
    return idx;
  };
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> c(dim, 0);
  for (int x = 0; x < n; ++x) {
    int rest = x;
    for (int a = dim - 1; a >= 0; --a) {
      c[a] = rest % sides[a];
      rest /= sides[a];
    }
    for (int a = 0; a < dim; ++a)
      for (int step : {-1, 1}) {
        m(x, x) -= 1.0;
        auto d = c;
        d[a] += step;
        if (torus)
          d[a] = (d[a] + sides[a]) % sides[a];
        else if (d[a] < 0 || d[a] >= sides[a])
          continue;
        m(x, index(d)) += 1.0;
      }
  }
  return m;
}

inline Eigen::MatrixXd edge_list_laplacian_matrix(const std::vector<std::pair<int, int>>& edges, int n)
{
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (auto [a, b] : edges) {
    m(a, b) += 1.0;
    m(b, a) += 1.0;
    m(a, a) -= 1.0;
    m(b, b) -= 1.0;
  }
  return m;
}

inline logschro::Field delta(int n, int v)
{
  logschro::Field u = logschro::Field::Zero(n);
  u[v] = 1.0;
  return u;
}

}  // namespace support
