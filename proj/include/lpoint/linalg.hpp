#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lpoint {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct HermitianEigen {
    Eigen::VectorXd values;  // ascending
    CMatrix vectors;         // columns, orthonormal
    int sweeps = 0;
};

// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
// Throws ConvergenceError if the off-diagonal norm does not fall below
// rel_tol * ||A||_F within max_sweeps, or if the final residual
// ||Av - lambda v|| exceeds 1e-9 * ||A||.
HermitianEigen jacobi_eigh(const CMatrix& a, double rel_tol = 1e-15, int max_sweeps = 60);

double hermiticity_defect(const CMatrix& a);  // max |A - A^H| entry

// Groups ascending eigenvalues into runs whose consecutive gaps are <= tol.
// Returns [begin, end) index pairs.
std::vector<std::pair<int, int>> degenerate_groups(const Eigen::VectorXd& values, double tol);

}  // namespace lpoint
