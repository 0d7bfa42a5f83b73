#ifndef DBK_THETA_HPP
#define DBK_THETA_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dbk/bounds.hpp"
#include "dbk/graph.hpp"

namespace dbk {

// Lovasz theta of the complement, theta(comp(G)), which sandwiches the clique
// number: omega(G) <= theta(comp(G)) <= chi(G).  Computed as the SDP
//
//   max <J, X>   s.t.  tr(X) = 1,  X_ij = 0 for every non-edge (i,j) of G,
//                      X positive semidefinite,
//
// solved with the Helmberg-Rendl-Vanderbei-Wolkowicz primal-dual interior
// point method.  The dual multipliers are turned into a certificate at the
// end: any symmetric B with unit diagonal and B_ij = 1 on edges of G has
// lambda_max(B) >= theta(comp(G)), so the returned value is a true upper
// bound even when the iteration stopped early.  Cost per iteration is cubic
// in the number of non-edges, hence the vertex-count cutoff.

struct ThetaOptions {
  double tol = 1e-3;   // target duality gap; certification keeps soundness anyway
  int max_iter = 200;
  int cutoff = 60;     // refuse graphs larger than this
};

// Optional process-wide memo for repeated bound evaluations of identical
// subgraphs (the decomposition revisits the same graphs across configs).
// Keyed by a 128-bit content hash of the adjacency structure; deterministic
// because the computed value itself is deterministic.
class ThetaCache {
 public:
  bool lookup(const std::array<uint64_t, 2>& key, double& out) {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    out = it->second;
    return true;
  }

  void store(const std::array<uint64_t, 2>& key, double val) {
    std::lock_guard<std::mutex> lk(mu_);
    map_.emplace(key, val);
  }

  size_t size() {
    std::lock_guard<std::mutex> lk(mu_);
    return map_.size();
  }

 private:
  struct KeyHash {
    size_t operator()(const std::array<uint64_t, 2>& k) const {
      return size_t(k[0] ^ (k[1] * 0x9E3779B97F4A7C15ULL));
    }
  };
  std::mutex mu_;
  std::unordered_map<std::array<uint64_t, 2>, double, KeyHash> map_;
};

namespace detail {

inline std::array<uint64_t, 2> theta_cache_key(const Graph& g, const ThetaOptions& opt) {
  uint64_t h1 = 0xcbf29ce484222325ULL, h2 = 0x100000001b3ULL;
  auto fold = [&](uint64_t w) {
    h1 = (h1 ^ w) * 0x100000001b3ULL;
    h2 = (h2 + w) * 0x9E3779B97F4A7C15ULL;
    h2 ^= h2 >> 29;
  };
  fold(uint64_t(g.size()));
  fold(uint64_t(std::llround(opt.tol * 1e12)));
  for (int v = 0; v < g.size(); ++v)
    for (uint64_t w : g.neighbors(v).words()) fold(w);
  return {h1, h2};
}

}  // namespace detail

inline std::optional<double> lovasz_theta_complement(const Graph& g,
                                                     const ThetaOptions& opt = {},
                                                     ThetaCache* cache = nullptr) {
  using Mat = Eigen::MatrixXd;
  using Vec = Eigen::VectorXd;

  int n = g.size();
  if (n > opt.cutoff) return std::nullopt;
  if (n == 0) return 0.0;
  if (n == 1) return 1.0;

  std::array<uint64_t, 2> key{};
  if (cache) {
    key = detail::theta_cache_key(g, opt);
    double hit;
    if (cache->lookup(key, hit)) return hit;
  }

  std::vector<std::pair<int, int>> pairs;  // non-edges of g = edges of comp(G)
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.adjacent(i, j)) pairs.emplace_back(i, j);
  int m = int(pairs.size());  // constraint m is the trace constraint

  Mat X = Mat::Identity(n, n) / double(n);
  Mat Z = double(n + 1) * Mat::Identity(n, n) - Mat::Ones(n, n);
  Vec y = Vec::Zero(m + 1);
  y(m) = double(n + 1);
  double mu = Z.cwiseProduct(X).sum() / (2.0 * n);
  double gap_target = 0.5 * opt.tol;

  auto pd_step = [](const Mat& A, const Mat& dA) {
    // largest tested alpha in (0,1] keeping A + alpha*dA positive definite;
    // shrinking preserves definiteness by convexity of the PD cone
    double alpha = 1.0;
    while (alpha > 1e-12) {
      Eigen::LLT<Mat> llt(A + alpha * dA);
      if (llt.info() == Eigen::Success) break;
      alpha *= 0.8;
    }
    return alpha;
  };

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    double phi = y(m);      // dual objective
    double psi = X.sum();   // primal objective <J, X>
    if (phi - psi <= gap_target) break;

    Eigen::LLT<Mat> lltZ(Z);
    if (lltZ.info() != Eigen::Success) break;
    Mat Zi = lltZ.solve(Mat::Identity(n, n));
    Zi = 0.5 * (Zi + Zi.transpose());
    Mat ZiX = Zi * X;

    // Schur complement system M dy = mu * A(Zi) - b
    Mat M(m + 1, m + 1);
    Vec rhs(m + 1);
    for (int k = 0; k < m; ++k) {
      auto [i, j] = pairs[k];
      for (int l = 0; l < m; ++l) {
        auto [p, q] = pairs[l];
        M(k, l) = Zi(i, q) * X(p, j) + Zi(j, p) * X(q, i) +
                  Zi(i, p) * X(q, j) + Zi(j, q) * X(p, i);
      }
      M(k, m) = M(m, k) = ZiX(i, j) + ZiX(j, i);
      rhs(k) = 2.0 * Zi(i, j);
    }
    M(m, m) = ZiX.trace();
    rhs(m) = Zi.trace();

    Vec b = Vec::Zero(m + 1);
    b(m) = 1.0;
    Vec dy = M.ldlt().solve(mu * rhs - b);
    if (!dy.allFinite()) break;

    Mat dZ = dy(m) * Mat::Identity(n, n);
    for (int k = 0; k < m; ++k) {
      auto [i, j] = pairs[k];
      dZ(i, j) += dy(k);
      dZ(j, i) += dy(k);
    }
    Mat dX = mu * Zi - X - Zi * dZ * X;
    dX = 0.5 * (dX + dX.transpose()).eval();

    double ap = pd_step(X, dX);
    double ad = pd_step(Z, dZ);
    if (ap < 1.0) ap *= 0.95;
    if (ad < 1.0) ad *= 0.95;

    X += ap * dX;
    y += ad * dy;
    Z += ad * dZ;

    mu = Z.cwiseProduct(X).sum() / (2.0 * n);
    if (ap + ad > 1.8) mu *= 0.5;
  }

  // Certificate: B = J - sum_k y_k A_k has unit diagonal and ones on the
  // edges of g, so lambda_max(B) bounds theta(comp(G)) from above no matter
  // how accurate the iterates are.
  Mat B = Mat::Ones(n, n);
  for (int k = 0; k < m; ++k) {
    auto [i, j] = pairs[k];
    B(i, j) -= y(k);
    B(j, i) -= y(k);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(B, Eigen::EigenvaluesOnly);
  double value = es.eigenvalues().maxCoeff();

  if (cache) cache->store(key, value);
  return value;
}

// Integer clique-number bound derived from the certified theta value.
// Soundness: omega <= theta <= value, and value + tol >= omega implies
// floor(value + tol) >= omega.
inline std::optional<BoundResult> lovasz_theta_ub(const Graph& g,
                                                  const ThetaOptions& opt = {},
                                                  ThetaCache* cache = nullptr) {
  auto v = lovasz_theta_complement(g, opt, cache);
  if (!v) return std::nullopt;
  return BoundResult{int(std::floor(*v + opt.tol)), true, "lovasz", {}};
}

}  // namespace dbk

#endif  // DBK_THETA_HPP
