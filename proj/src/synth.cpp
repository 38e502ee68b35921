#include "dcat/synth.hpp"

#include <Eigen/QR>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dcat/linalg.hpp"

namespace dcat {

namespace {

// Box-Muller on 53-bit uniforms, so streams are identical across standard libraries.
struct Normal {
  std::mt19937_64 rng;
  explicit Normal(std::uint64_t seed) : rng(seed) {}
  double uniform() { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }
  double operator()() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  Mat matrix(int r, int c) {
    Mat M(r, c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) M(i, j) = (*this)();
    return M;
  }
};

Mat random_orthogonal(Normal& g, int d) {
  Mat G = g.matrix(d, d);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ() * Mat::Identity(d, d);
  // fix column signs so Q does not depend on QR sign conventions
  Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  return Q;
}

Vec geometric_spectrum(int d, double lo, double hi) {
  Vec s(d);
  for (int k = 0; k < d; ++k) {
    const double t = d == 1 ? 0.0 : static_cast<double>(k) / (d - 1);
    s(k) = hi * std::pow(lo / hi, t);
  }
  return s;
}

struct SimilarityBase {
  Mat Q;
  Vec s;
  std::vector<Mat> P;  // Q S^{1/2} R_i S^{1/2} Q^T, unscaled
  double beta_raw = 0.0;
  std::vector<Vec> c;
};

SimilarityBase similarity_base(int m, int d, double mu, double L, std::uint64_t seed) {
  if (m < 1 || d < 1 || !(mu > 0.0) || L < mu) throw std::invalid_argument("similarity: bad spec");
  Normal g(seed);
  SimilarityBase b;
  b.Q = random_orthogonal(g, d);
  b.s = geometric_spectrum(d, mu, L);
  std::vector<Mat> R(m);
  Mat mean = Mat::Zero(d, d);
  for (int i = 0; i < m; ++i) {
    Mat G = g.matrix(d, d);
    R[i] = 0.5 * (G + G.transpose());
    mean += R[i] / m;
  }
  Vec sh = (b.s.array() - mu).sqrt().matrix();
  for (int i = 0; i < m; ++i) {
    Mat Ri = R[i] - mean;
    Mat inner = sh.asDiagonal() * Ri * sh.asDiagonal();
    b.P.push_back(b.Q * inner * b.Q.transpose());
    b.beta_raw = std::max(b.beta_raw, sym_norm2(b.P.back()));
  }
  Vec x_true = g.matrix(d, 1).col(0);
  for (int i = 0; i < m; ++i) b.c.push_back(g.matrix(d, 1).col(0));
  for (int i = 0; i < m; ++i) b.c[i] += b.Q * b.s.asDiagonal() * b.Q.transpose() * x_true;
  return b;
}

std::vector<AgentLoss> similarity_agents(const SimilarityBase& b, double scale) {
  Mat Hbar = b.Q * b.s.asDiagonal() * b.Q.transpose();
  std::vector<AgentLoss> out;
  for (std::size_t i = 0; i < b.P.size(); ++i) {
    Mat H = Hbar + scale * b.P[i];
    H = 0.5 * (H + H.transpose());
    if (sym_min_eig(H) < 0.0)
      throw std::domain_error("similarity: perturbation too large for convex agents");
    out.push_back(AgentLoss::quadratic(H, b.c[i]));
  }
  return out;
}

}  // namespace

Dataset synth_classification(int N, int d, double decay, double flip, std::uint64_t seed) {
  if (N < 1 || d < 1) throw std::invalid_argument("synth_classification: bad size");
  Normal g(seed);
  Vec w = g.matrix(d, 1).col(0);
  for (int j = 0; j < d; ++j)
    if (j % 3 == 2) w(j) = 0.0;
  Dataset ds;
  ds.d = d;
  for (int r = 0; r < N; ++r) {
    std::vector<std::pair<int, double>> row;
    double t = 0.0;
    for (int j = 0; j < d; ++j) {
      const double sc = d == 1 ? 1.0 : std::pow(decay, -static_cast<double>(j) / (d - 1));
      const double v = sc * g();
      row.emplace_back(j, v);
      t += v * w(j);
    }
    double y = t >= 0.0 ? 1.0 : -1.0;
    if (g.uniform() < flip) y = -y;
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(y);
  }
  return ds;
}

std::vector<AgentLoss> synth_similarity_agents(const SimilaritySpec& s) {
  SimilarityBase b = similarity_base(s.m, s.d, s.mu, s.L, s.seed);
  const double scale = b.beta_raw > 0.0 ? s.beta / b.beta_raw : 0.0;
  return similarity_agents(b, scale);
}

std::vector<CompositeProblem> synth_similarity_sweep(int m, int d, const std::vector<int>& n_list,
                                                     std::uint64_t seed, double mu, double L,
                                                     double beta1) {
  SimilarityBase b = similarity_base(m, d, mu, L, seed);
  const double scale1 = b.beta_raw > 0.0 ? beta1 / b.beta_raw : 0.0;
  std::vector<CompositeProblem> out;
  for (int n : n_list) {
    if (n < 1) throw std::invalid_argument("synth_similarity_sweep: n must be positive");
    out.emplace_back(similarity_agents(b, scale1 / std::sqrt(static_cast<double>(n))),
                     Regularizer::zero());
  }
  return out;
}

std::vector<AgentLoss> logistic_agents(const Dataset& ds, int m, double gamma, std::uint64_t seed) {
  auto shards = partition(ds.size(), m, seed);
  std::vector<AgentLoss> out;
  for (const auto& sh : shards) out.push_back(AgentLoss::logistic(ds.dense(sh), ds.label_vec(sh), gamma));
  return out;
}

double logistic_data_L(const Dataset& ds, int m, std::uint64_t seed) {
  auto shards = partition(ds.size(), m, seed);
  Mat S = Mat::Zero(ds.d, ds.d);
  for (const auto& sh : shards) {
    Mat A = ds.dense(sh);
    S += A.transpose() * A / (4.0 * A.rows() * m);
  }
  return sym_max_eig(S);
}

}  // namespace dcat
