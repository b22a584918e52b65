#include "tilab/linalg.hpp"

#include <lapacke.h>

#include "tilab/errors.hpp"

namespace tilab {
namespace linalg {

SymEigen sym_eigen(const Eigen::MatrixXd& A) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    SymEigen out;
    out.vectors = A; // dsyevd overwrites with eigenvectors
    out.values.resize(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.vectors.data(), n, out.values.data());
    if (info != 0) throw SingularSystem("dsyevd failed, info=" + std::to_string(info));
    return out;
}

GenEigen general_eigen(const Eigen::MatrixXd& A) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    Eigen::MatrixXd work = A;
    std::vector<double> wr(n), wi(n);
    Eigen::MatrixXd vr(n, n);
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, wr.data(),
                                          wi.data(), nullptr, n, vr.data(), n);
    if (info != 0) throw SingularSystem("dgeev failed, info=" + std::to_string(info));

    GenEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (lapack_int j = 0; j < n; ++j) {
        out.values(j) = std::complex<double>(wr[j], wi[j]);
        if (wi[j] > 0.0) {
            // complex conjugate pair packed in columns j, j+1
            out.vectors.col(j) = vr.col(j).cast<std::complex<double>>() +
                                 std::complex<double>(0, 1) * vr.col(j + 1).cast<std::complex<double>>();
        } else if (wi[j] < 0.0) {
            out.vectors.col(j) = vr.col(j - 1).cast<std::complex<double>>() -
                                 std::complex<double>(0, 1) * vr.col(j).cast<std::complex<double>>();
        } else {
            out.vectors.col(j) = vr.col(j).cast<std::complex<double>>();
        }
    }
    return out;
}

Eigen::VectorXcd solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    Eigen::MatrixXcd lu = A;
    Eigen::VectorXcd x = b;
    std::vector<lapack_int> ipiv(n);
    const lapack_int info =
        LAPACKE_zgesv(LAPACK_COL_MAJOR, n, 1, reinterpret_cast<lapack_complex_double*>(lu.data()),
                      n, ipiv.data(), reinterpret_cast<lapack_complex_double*>(x.data()), n);
    if (info > 0) throw SingularSystem("zgesv: singular system, pivot " + std::to_string(info));
    if (info < 0) throw SingularSystem("zgesv failed, info=" + std::to_string(info));
    return x;
}

} // namespace linalg
} // namespace tilab
