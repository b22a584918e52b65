#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace tilab {
namespace linalg {

struct SymEigen {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // columns
};

struct GenEigen {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors; // columns, matched to values
};

// Dense symmetric eigensolve (LAPACK dsyevd).
SymEigen sym_eigen(const Eigen::MatrixXd& A);

// Dense real nonsymmetric eigensolve (LAPACK dgeev), right eigenvectors.
GenEigen general_eigen(const Eigen::MatrixXd& A);

// Dense complex linear solve (LAPACK zgesv). Throws SingularSystem on a
// singular factorization.
Eigen::VectorXcd solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b);

} // namespace linalg
} // namespace tilab
