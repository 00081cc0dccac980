#pragma once

#include <vector>

#include <Eigen/Dense>

namespace aeqnd {

struct Spectrum {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns match values
};

// Hermitian eigendecomposition that splits the matrix into its connected
// components first, so exactly-degenerate levels in decoupled sectors keep
// pure sector character. Entries below rel_tol * max|h| count as zero.
Spectrum eigh(const Eigen::MatrixXcd& h, double rel_tol = 1e-14);

// Connected components of the |h_ij| > threshold graph, each sorted ascending.
std::vector<std::vector<int>> coupled_components(const Eigen::MatrixXcd& h,
                                                 double threshold);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

double spread(const Eigen::VectorXd& values);
double spread(const std::vector<double>& values);

}  // namespace aeqnd
