#include "dcat/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace dcat {

double power_iteration_psd(const Mat& S, double tol, int max_iter) {
  const Eigen::Index n = S.rows();
  if (n == 0) return 0.0;
  Vec v = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
  // A fixed non-symmetric start avoids landing orthogonal to the top vector.
  for (Eigen::Index i = 0; i < n; ++i) v(i) += 1e-3 * static_cast<double>(i % 7);
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = S * v;
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    double diff = (w - v).norm();
    v = w;
    lam = v.dot(S * v);
    if (diff < tol) break;
  }
  return lam;
}

double sym_max_eig(const Mat& S) {
  if (S.rows() == 0) return 0.0;
  if (S.rows() <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(S.rows() - 1);
  }
  // shift to make PSD: S + c I with c >= |lambda_min| bound via Gershgorin
  double c = S.cwiseAbs().rowwise().sum().maxCoeff();
  Mat shifted = S + c * Mat::Identity(S.rows(), S.cols());
  return power_iteration_psd(shifted) - c;
}

double sym_min_eig(const Mat& S) { return -sym_max_eig(-S); }

double sym_norm2(const Mat& S) {
  return std::max(std::abs(sym_max_eig(S)), std::abs(sym_min_eig(S)));
}

double spectral_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  if (std::min(A.rows(), A.cols()) <= kDenseLimit) {
    Mat G = A.rows() < A.cols() ? Mat(A * A.transpose()) : Mat(A.transpose() * A);
    return std::sqrt(std::max(0.0, sym_max_eig(G)));
  }
  Mat G = A.transpose() * A;
  return std::sqrt(std::max(0.0, power_iteration_psd(G)));
}

}  // namespace dcat
