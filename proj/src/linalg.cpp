#include "magtb/linalg.hpp"

#include <complex>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace magtb::linalg {

HermitianEigen eigh(const MatrixXc& H, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(H.rows());
  if (H.cols() != n) throw ArgumentError("eigh needs a square matrix");
  HermitianEigen out;
  out.values.resize(n);
  if (n == 0) return out;
  MatrixXc A = H;
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, A.data(), n, out.values.data());
  if (info != 0) throw SolverError("zheevd failed with info " + std::to_string(info));
  if (vectors) out.vectors = std::move(A);
  return out;
}

HermitianEigen eigh_range(const MatrixXc& H, int il, int iu) {
  const lapack_int n = static_cast<lapack_int>(H.rows());
  if (H.cols() != n) throw ArgumentError("eigh_range needs a square matrix");
  if (il < 0 || iu < il || iu >= n) throw ArgumentError("eigenvalue index range out of bounds");
  MatrixXc A = H;
  const lapack_int k = iu - il + 1;
  std::vector<double> w(n);
  MatrixXc Z(n, k);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, A.data(), n, 0.0, 0.0, il + 1, iu + 1,
                                         0.0, &found, w.data(), Z.data(), n, isuppz.data());
  if (info != 0 || found != k) throw SolverError("zheevr failed with info " + std::to_string(info));
  HermitianEigen out;
  out.values = Eigen::Map<Eigen::VectorXd>(w.data(), k);
  out.vectors = std::move(Z);
  return out;
}

SVD svd(const MatrixXc& A_in) {
  const lapack_int m = static_cast<lapack_int>(A_in.rows()), n = static_cast<lapack_int>(A_in.cols());
  const lapack_int k = std::min(m, n);
  SVD out;
  out.s.resize(k);
  if (k == 0) return out;
  MatrixXc A = A_in;
  MatrixXc U(m, k), VT(k, n);
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, A.data(), m, out.s.data(), U.data(), m, VT.data(), k);
  if (info != 0) throw SolverError("zgesdd failed with info " + std::to_string(info));
  out.U = std::move(U);
  out.V = VT.adjoint();
  return out;
}

double hermiticity_defect(const MatrixXc& H) {
  if (H.size() == 0) return 0.0;
  return (H - H.adjoint()).cwiseAbs().maxCoeff();
}

MatrixXc hermitian_part(const MatrixXc& H) { return 0.5 * (H + H.adjoint()); }

}  // namespace magtb::linalg
