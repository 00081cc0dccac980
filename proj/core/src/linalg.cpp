#include "aeqnd/linalg.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace aeqnd {

std::vector<std::vector<int>> coupled_components(const Eigen::MatrixXcd& h,
                                                 double threshold) {
  const int n = static_cast<int>(h.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(h(i, j)) > threshold || std::abs(h(j, i)) > threshold) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

Spectrum eigh(const Eigen::MatrixXcd& h, double rel_tol) {
  const Eigen::Index n = h.rows();
  Spectrum out;
  out.values.resize(n);
  out.vectors = Eigen::MatrixXcd::Zero(n, n);
  if (n == 0) return out;
  const double scale = h.cwiseAbs().maxCoeff();
  const auto groups = coupled_components(h, rel_tol * scale);

  struct Entry {
    double value;
    std::size_t group;
    Eigen::Index local;
  };
  std::vector<Entry> entries;
  std::vector<Eigen::MatrixXcd> local_vectors;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& idx = groups[g];
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = h(idx[a], idx[b]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
    local_vectors.push_back(solver.eigenvectors());
    for (Eigen::Index a = 0; a < k; ++a) entries.push_back({solver.eigenvalues()(a), g, a});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.value < b.value; });
  for (Eigen::Index col = 0; col < n; ++col) {
    const Entry& e = entries[static_cast<std::size_t>(col)];
    out.values(col) = e.value;
    const auto& idx = groups[e.group];
    for (std::size_t a = 0; a < idx.size(); ++a) {
      out.vectors(idx[a], col) = local_vectors[e.group](static_cast<Eigen::Index>(a), e.local);
    }
  }
  return out;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double spread(const Eigen::VectorXd& values) {
  if (values.size() == 0) return 0.0;
  return values.maxCoeff() - values.minCoeff();
}

double spread(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

}  // namespace aeqnd
