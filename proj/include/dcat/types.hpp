#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace dcat {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Agent-stacked matrices are m x d: row i belongs to agent i.

struct Counters {
  std::int64_t comm = 0;   // neighbor exchanges of one m x d matrix
  std::int64_t grads = 0;  // component gradients (full gradients for n = 1 losses)
  std::int64_t prox = 0;   // per-agent prox evaluations

  Counters& operator+=(const Counters& o) {
    comm += o.comm;
    grads += o.grads;
    prox += o.prox;
    return *this;
  }
};

inline Counters operator+(Counters a, const Counters& b) { return a += b; }

// x - 1 xbar^T
inline Mat disagreement(const Mat& X) {
  return X.rowwise() - X.colwise().mean();
}

}  // namespace dcat

namespace dcat {

// Minimizer of a (sub)problem and its optimal value.
struct Reference {
  Vec x;
  double u = 0.0;
};

}  // namespace dcat
