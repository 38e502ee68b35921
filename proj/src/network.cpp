#include "dcat/network.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dcat {

void Graph::add_edge(int i, int j) {
  if (i == j || has_edge(i, j)) return;
  adj[i].push_back(j);
  adj[j].push_back(i);
  std::sort(adj[i].begin(), adj[i].end());
  std::sort(adj[j].begin(), adj[j].end());
}

bool Graph::has_edge(int i, int j) const {
  return std::binary_search(adj[i].begin(), adj[i].end(), j);
}

int Graph::edge_count() const {
  int s = 0;
  for (const auto& a : adj) s += static_cast<int>(a.size());
  return s / 2;
}

namespace {

std::vector<int> component_labels(const Graph& g) {
  std::vector<int> label(g.m, -1);
  int c = 0;
  for (int s = 0; s < g.m; ++s) {
    if (label[s] >= 0) continue;
    std::vector<int> stack{s};
    label[s] = c;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g.adj[v])
        if (label[w] < 0) {
          label[w] = c;
          stack.push_back(w);
        }
    }
    ++c;
  }
  return label;
}

}  // namespace

int Graph::component_count() const {
  auto lab = component_labels(*this);
  return lab.empty() ? 0 : *std::max_element(lab.begin(), lab.end()) + 1;
}

Graph path_graph(int m) {
  Graph g(m);
  for (int i = 0; i + 1 < m; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph complete_graph(int m) {
  Graph g(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) g.add_edge(i, j);
  return g;
}

Graph ring_graph(int m) {
  Graph g = path_graph(m);
  if (m > 2) g.add_edge(m - 1, 0);
  return g;
}

Graph erdos_renyi(int m, double p, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("erdos_renyi: m >= 1 required");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("erdos_renyi: p in (0,1] required");
  auto draw = [&](std::uint64_t s) {
    std::mt19937_64 rng(s);
    Graph g(m);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p) g.add_edge(i, j);
      }
    return g;
  };
  Graph g = draw(seed);
  for (int attempt = 1; attempt <= 100 && !g.connected(); ++attempt) g = draw(seed + attempt);
  if (!g.connected()) {
    auto lab = component_labels(g);
    int nc = *std::max_element(lab.begin(), lab.end()) + 1;
    std::vector<int> rep(nc, -1);
    for (int v = 0; v < m; ++v)
      if (rep[lab[v]] < 0) rep[lab[v]] = v;
    for (int c = 0; c + 1 < nc; ++c) g.add_edge(rep[c], rep[c + 1]);
  }
  return g;
}

Mat metropolis_weights(const Graph& g) {
  Mat W = Mat::Zero(g.m, g.m);
  for (int i = 0; i < g.m; ++i)
    for (int j : g.adj[i]) W(i, j) = 1.0 / (1.0 + std::max(g.degree(i), g.degree(j)));
  for (int i = 0; i < g.m; ++i) W(i, i) = 1.0 - (W.row(i).sum() - W(i, i));
  return W;
}

double spectral_gap(const Mat& W) {
  const Eigen::Index m = W.rows();
  Mat D = W - Mat::Constant(m, m, 1.0 / static_cast<double>(m));
  Eigen::SelfAdjointEigenSolver<Mat> es(D, Eigen::EigenvaluesOnly);
  double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  if (rho < 1e-14) rho = 0.0;
  if (rho >= 1.0 - 1e-12) throw std::domain_error("gossip matrix is disconnected or periodic (rho >= 1)");
  return rho;
}

Topology make_topology(const Graph& g) {
  Topology t;
  t.graph = g;
  t.W = metropolis_weights(g);
  t.rho = spectral_gap(t.W);
  return t;
}

Mat fastmix(const Mat& X, int rounds, const Mat& W, double rho) {
  if (rounds <= 0) return X;
  const double s = std::sqrt(1.0 - rho * rho);
  const double eta = (1.0 - s) / (1.0 + s);
  Mat prev = X;
  Mat cur = X;
  for (int t = 0; t < rounds; ++t) {
    Mat next = (1.0 + eta) * (W * cur) - eta * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Mat chebyshev_rounds(const Mat& X, int K, const Mat& W, double rho) {
  if (K <= 0) return X;
  if (K == 1 || rho == 0.0) return W * X;
  // c_k = T_k(1/rho); x_{k+1} = (2 c_k / (rho c_{k+1})) W x_k - (c_{k-1} / c_{k+1}) x_{k-1}
  double c_prev = 1.0;
  double c_cur = 1.0 / rho;
  Mat x_prev = X;
  Mat x_cur = W * X;
  for (int k = 1; k < K; ++k) {
    double c_next = 2.0 * c_cur / rho - c_prev;
    Mat x_next = (2.0 * c_cur / (rho * c_next)) * (W * x_cur) - (c_prev / c_next) * x_prev;
    x_prev = std::move(x_cur);
    x_cur = std::move(x_next);
    c_prev = c_cur;
    c_cur = c_next;
  }
  return x_cur;
}

Mat chebyshev_rounds(const Mat& X, int K, const Mat& W) {
  return chebyshev_rounds(X, K, W, spectral_gap(W));
}

int chebyshev_rounds_for(double rho, double rho_target) {
  if (rho <= rho_target) return 1;
  double c_prev = 1.0;
  double c_cur = 1.0 / rho;
  int K = 1;
  while (1.0 / c_cur > rho_target) {
    double c_next = 2.0 * c_cur / rho - c_prev;
    c_prev = c_cur;
    c_cur = c_next;
    ++K;
  }
  return K;
}

int chebyshev_rounds_simple(double rho, double rho_target) {
  return static_cast<int>(std::ceil(std::log(1.0 / rho_target) / std::sqrt(1.0 - rho)));
}

Gossip plain_gossip(const Topology& t) { return {t.W, 1, t.rho}; }

Gossip chebyshev_gossip(const Topology& t, int K) {
  const Eigen::Index m = t.W.rows();
  if (K < 1) throw std::invalid_argument("chebyshev_gossip: K >= 1 required");
  Gossip g;
  g.P = chebyshev_rounds(Mat::Identity(m, m), K, t.W, t.rho);
  g.P = 0.5 * (g.P + g.P.transpose());
  g.rounds = K;
  g.rho = spectral_gap(g.P);
  return g;
}

namespace {

PudaMatrices finish(PudaMatrices pm) {
  const Eigen::Index m = pm.W.rows();
  Eigen::SelfAdjointEigenSolver<Mat> eh(pm.Hsq, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Mat> ec(pm.C, Eigen::EigenvaluesOnly);
  pm.sigma_max_C = std::max(0.0, ec.eigenvalues().maxCoeff());
  pm.sigma_max_Hsq = std::max(0.0, eh.eigenvalues().maxCoeff());
  double smin = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    double v = eh.eigenvalues()(k);
    if (v > 1e-10) {
      smin = v;
      break;
    }
  }
  pm.sigma_min_plus_Hsq = smin;
  const Mat I = Mat::Identity(m, m);
  pm.W_identity = (pm.W - I).cwiseAbs().maxCoeff() < 1e-15;
  pm.Hsq_zero = pm.Hsq.cwiseAbs().maxCoeff() < 1e-15;
  pm.C_zero = pm.C.cwiseAbs().maxCoeff() < 1e-15;
  validate_puda(pm);
  return pm;
}

}  // namespace

void validate_puda(const PudaMatrices& pm, double tol) {
  const Eigen::Index m = pm.W.rows();
  const Mat I = Mat::Identity(m, m);
  const Vec one = Vec::Ones(m);
  auto fail = [](const char* what) { throw std::domain_error(std::string("inadmissible PUDA matrices: ") + what); };
  if ((pm.W - pm.W.transpose()).cwiseAbs().maxCoeff() > tol) fail("W not symmetric");
  if ((pm.W * one - one).cwiseAbs().maxCoeff() > tol) fail("W not doubly stochastic");
  if ((pm.Hsq - pm.Hsq.transpose()).cwiseAbs().maxCoeff() > tol) fail("H^2 not symmetric");
  if ((pm.C - pm.C.transpose()).cwiseAbs().maxCoeff() > tol) fail("C not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> e1(I - pm.Hsq - pm.W * pm.W, Eigen::EigenvaluesOnly);
  if (e1.eigenvalues().minCoeff() < -tol) fail("W^2 <= I - H^2 violated");
  Eigen::SelfAdjointEigenSolver<Mat> ec(pm.C, Eigen::EigenvaluesOnly);
  if (ec.eigenvalues().minCoeff() < -tol || ec.eigenvalues().maxCoeff() > 2.0 + tol) fail("0 <= C <= 2I violated");
  if ((pm.C * one).cwiseAbs().maxCoeff() > tol) fail("C 1 != 0");
  // null(H^2) = span(1): H^2 1 = 0 and H^2 positive definite on 1-perp.
  if ((pm.Hsq * one).cwiseAbs().maxCoeff() > tol) fail("H^2 1 != 0");
  if (m > 1) {
    Mat J = Mat::Constant(m, m, 1.0 / static_cast<double>(m));
    Eigen::SelfAdjointEigenSolver<Mat> eh(pm.Hsq + J, Eigen::EigenvaluesOnly);
    if (eh.eigenvalues().minCoeff() <= tol) fail("null(H^2) larger than span(1)");
  }
}

PudaMatrices prox_ed_triple(const Mat& Wt, int rounds) {
  const Eigen::Index m = Wt.rows();
  const Mat I = Mat::Identity(m, m);
  PudaMatrices pm;
  pm.W = 0.5 * (I + Wt);
  pm.Hsq = 0.5 * (I - Wt);
  pm.C = Mat::Zero(m, m);
  pm.rounds = rounds;
  return finish(std::move(pm));
}

PudaMatrices extra_triple(const Mat& Wt, int rounds) {
  const Eigen::Index m = Wt.rows();
  const Mat I = Mat::Identity(m, m);
  PudaMatrices pm;
  pm.W = 0.5 * (I + Wt);
  pm.Hsq = 0.5 * (I - Wt);
  pm.C = 0.5 * (I - Wt);
  pm.rounds = rounds;
  return finish(std::move(pm));
}

}  // namespace dcat
