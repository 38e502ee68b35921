#pragma once

#include "dcat/types.hpp"

namespace dcat {

// Extreme eigenvalues of a symmetric matrix. Dense eigensolve for small
// sizes, power iteration (tol 1e-10, 10000 iterations) above kDenseLimit.
inline constexpr int kDenseLimit = 256;

double sym_max_eig(const Mat& S);
double sym_min_eig(const Mat& S);
double sym_norm2(const Mat& S);  // largest |eigenvalue|

// Largest singular value of a general matrix, i.e. sqrt(max eig(A^T A)).
double spectral_norm(const Mat& A);

// Power iteration on a symmetric PSD operator; returns the top eigenvalue.
double power_iteration_psd(const Mat& S, double tol = 1e-10, int max_iter = 10000);

}  // namespace dcat
