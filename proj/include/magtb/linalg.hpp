#pragma once

#include "magtb/common.hpp"

namespace magtb::linalg {

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  MatrixXc vectors;        // columns; empty when only values were requested
};

// Full decomposition through LAPACK zheevd.
HermitianEigen eigh(const MatrixXc& H, bool vectors = true);
// Eigenpairs with indices [il, iu] (0-based, inclusive) through zheevr.
HermitianEigen eigh_range(const MatrixXc& H, int il, int iu);

struct SVD {
  Eigen::VectorXd s;  // descending
  MatrixXc U;
  MatrixXc V;  // A = U diag(s) V^*
};

// Thin SVD through LAPACK zgesdd.
SVD svd(const MatrixXc& A);

double hermiticity_defect(const MatrixXc& H);
MatrixXc hermitian_part(const MatrixXc& H);

}  // namespace magtb::linalg
