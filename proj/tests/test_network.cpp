#include <doctest.h>

#include "dcat/network.hpp"
#include "gen.hpp"

using namespace dcat;

namespace {

double dis(const Mat& X) { return disagreement(X).norm(); }

}  // namespace

TEST_CASE("Metropolis weights on small graphs") {
  Mat W = metropolis_weights(path_graph(3));
  CHECK(W(0, 1) == doctest::Approx(1.0 / 3));
  CHECK(W(1, 2) == doctest::Approx(1.0 / 3));
  CHECK(W(0, 0) == doctest::Approx(2.0 / 3));
  CHECK(W(2, 2) == doctest::Approx(2.0 / 3));
  CHECK(W(1, 1) == doctest::Approx(1.0 / 3));
  CHECK(W(0, 2) == 0.0);

  Mat K = metropolis_weights(complete_graph(3));
  CHECK((K - Mat::Constant(3, 3, 1.0 / 3)).cwiseAbs().maxCoeff() < 1e-15);

  Mat one = metropolis_weights(Graph(1));
  CHECK(one.rows() == 1);
  CHECK(one(0, 0) == 1.0);
}

TEST_CASE("spectral gap examples") {
  CHECK(spectral_gap(Mat::Constant(4, 4, 0.25)) == 0.0);
  CHECK(spectral_gap(metropolis_weights(path_graph(3))) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(spectral_gap(metropolis_weights(complete_graph(3))) == 0.0);
  Graph g(2);  // no edges: disconnected
  CHECK_THROWS_AS(spectral_gap(metropolis_weights(g)), std::domain_error);
}

TEST_CASE("Erdos-Renyi graphs are connected") {
  Graph one = erdos_renyi(1, 0.5, 3);
  CHECK(one.m == 1);
  CHECK(one.edge_count() == 0);

  Graph g = erdos_renyi(30, 0.5, 1);
  CHECK(g.connected());
  CHECK(g.edge_count() >= 29);
  CHECK(g.edge_count() <= 30 * 29 / 2);

  Graph sparse = erdos_renyi(5, 0.01, 2);
  CHECK(sparse.component_count() == 1);

  gen::Rng r(5);
  for (int t = 0; t < 30; ++t) {
    const int m = 2 + r.index(12);
    const double p = r.uniform(0.0, 0.6) + 1e-3;
    Graph h = erdos_renyi(m, p, 100 + t);
    CHECK(h.connected());
    Graph h2 = erdos_renyi(m, p, 100 + t);
    CHECK(h2.adj == h.adj);
    Mat W = metropolis_weights(h);
    CHECK((W - W.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((W.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK((W.array() >= 0).all());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j && W(i, j) > 0) CHECK(h.has_edge(i, j));
  }
}

TEST_CASE("FastMix: identity, consensus and mean preservation") {
  Topology t = make_topology(path_graph(3));
  gen::Rng r(6);
  Mat X = r.mat(3, 4);
  CHECK(fastmix(X, 0, t.W, t.rho) == X);
  Mat C = gen::stack(r.vec(4), 3);
  CHECK((fastmix(C, 7, t.W, t.rho) - C).cwiseAbs().maxCoeff() < 1e-14);
  Mat Y = fastmix(X, 9, t.W, t.rho);
  CHECK((Y.colwise().mean() - X.colwise().mean()).norm() <= 1e-12 * (1 + X.norm()));
}

TEST_CASE("FastMix beats plain gossip on an alternating pattern") {
  Topology t = make_topology(path_graph(3));
  Mat X(3, 1);
  X << 1, 0, -1;
  Mat plain = X;
  for (int k = 0; k < 10; ++k) plain = t.W * plain;
  CHECK(dis(fastmix(X, 10, t.W, t.rho)) < dis(plain));
}

TEST_CASE("consensus accelerators: disagreement shrinks with more rounds") {
  gen::Rng r(7);
  for (int trial = 0; trial < 10; ++trial) {
    Topology t = make_topology(erdos_renyi(8, 0.3, 40 + trial));
    if (t.rho >= 0.99) continue;
    Mat X = r.mat(8, 3);
    double prev = dis(X);
    for (int N = 1; N <= 12; ++N) {
      const double cur = dis(fastmix(X, N, t.W, t.rho));
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("Chebyshev rounds: small cases and mean preservation") {
  Topology t = make_topology(path_graph(3));
  gen::Rng r(8);
  Mat X = r.mat(3, 2);
  CHECK(chebyshev_rounds(X, 0, t.W) == X);
  CHECK((chebyshev_rounds(X, 1, t.W) - t.W * X).cwiseAbs().maxCoeff() < 1e-15);
  Mat Y = chebyshev_rounds(X, 6, t.W);
  CHECK((Y.colwise().mean() - X.colwise().mean()).norm() <= 1e-12 * (1 + X.norm()));
}

TEST_CASE("Chebyshev rounds reach the requested contraction") {
  Topology t = make_topology(path_graph(3));
  const double target = 1e-3;
  const int K = chebyshev_rounds_simple(t.rho, target);
  gen::Rng r(9);
  for (int s = 0; s < 20; ++s) {
    Mat X = r.mat(3, 2);
    CHECK(dis(chebyshev_rounds(X, K, t.W)) <= 2 * target * dis(X));
  }
  const int Kx = chebyshev_rounds_for(t.rho, target);
  CHECK(Kx <= K);
  Gossip g = chebyshev_gossip(t, Kx);
  CHECK(g.rounds == Kx);
  CHECK(g.rho <= target * (1 + 1e-9));
  CHECK_THROWS_AS(chebyshev_gossip(t, 0), std::invalid_argument);
}

TEST_CASE("Prox-ED triple") {
  PudaMatrices one = prox_ed_triple(Mat::Identity(1, 1));
  CHECK(one.W(0, 0) == 1.0);
  CHECK(one.Hsq(0, 0) == 0.0);
  CHECK(one.C(0, 0) == 0.0);

  PudaMatrices p3 = prox_ed_triple(metropolis_weights(path_graph(3)));
  CHECK(p3.sigma_min_plus_Hsq == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(p3.C_zero);

  Topology t = make_topology(erdos_renyi(6, 0.6, 4));
  CHECK_NOTHROW(validate_puda(prox_ed_triple(t.W)));
  CHECK_NOTHROW(validate_puda(extra_triple(t.W)));
}

TEST_CASE("PUDA validator rejects inadmissible matrices") {
  Mat bad = Mat::Identity(3, 3);
  bad(0, 1) = 0.5;  // not symmetric
  CHECK_THROWS(prox_ed_triple(bad));
  // a bipartite 2-cycle makes H^2 + J singular on the alternating vector
  Mat swap(2, 2);
  swap << 0, 1, 1, 0;
  PudaMatrices pm = prox_ed_triple(swap);
  pm.Hsq = Mat::Zero(2, 2);
  CHECK_THROWS(validate_puda(pm));
}
