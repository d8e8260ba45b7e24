#pragma once

// Spectra of the form Laplacian  Delta_p = delta d + d delta  on p-cochains.
//
// The codifferential used here is the exact Gram adjoint of the difference
// operator: with W_p the (block-diagonal) matrix of the L^2 inner product on
// p-cochains and D_p the sparse exterior-derivative matrix,
//
//     delta = W_p^{-1} D_p^T W_{p+1},
//
// so  <D a, b> = <a, delta b>  holds to round-off by construction and the
// Hodge-theoretic argument for the set identity
// spec Delta_p = spec(delta d) u spec(d delta) applies to the discrete
// complex verbatim.  On flat tori this delta coincides with the
// star-d-star composition of dec.hpp up to round-off (the stencil is
// skew-adjoint under the uniform vertex sum).
//
// Everything is symmetrized by conjugating with W^{1/2} before eigensolving.
// Dense solves below 4000 unknowns return complete spectra; larger problems
// use shift-inverted Lanczos with full reorthogonalization for the smallest
// `count` eigenvalues, and problems beyond 20000 unknowns are refused.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "fhsc/dec.hpp"
#include "fhsc/mesh.hpp"
#include "fhsc/num.hpp"

namespace fhsc {

using SpMat = Eigen::SparseMatrix<double>;

inline constexpr int kDenseEigenCap = 4000;
inline constexpr int kSparseEigenCap = 20000;

namespace detail {

// sparse matrix of exterior_d from degree p to degree p+1 (component-major)
inline SpMat d_matrix(const Mesh& mesh, int p) {
  const int nv = mesh.nv();
  const int nc_in = binomial(mesh.m, p), nc_out = binomial(mesh.m, p + 1);
  const auto& out_idx = increasing_indices(mesh.m, p + 1);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(size_t(nc_out) * (p + 1) * nv * 4);
  for (int k = 0; k < nc_out; ++k) {
    const MultiIndex& K = out_idx[k];
    for (int l = 0; l <= p; ++l) {
      MultiIndex rest{0, 0, 0, 0};
      int t = 0;
      for (int j = 0; j <= p; ++j)
        if (j != l) rest[t++] = K[j];
      const int cin = position_of_index(mesh.m, p, rest);
      const double sgn = (l % 2 == 0) ? 1.0 : -1.0;
      const int dir = K[l];
      const double c1 = sgn * 8.0 / (12.0 * mesh.spacing(dir));
      const double c2 = sgn * 1.0 / (12.0 * mesh.spacing(dir));
      for (int v = 0; v < nv; ++v) {
        const int row = k * nv + v;
        trip.emplace_back(row, cin * nv + mesh.shift(v, dir, 1), c1);
        trip.emplace_back(row, cin * nv + mesh.shift(v, dir, -1), -c1);
        trip.emplace_back(row, cin * nv + mesh.shift(v, dir, 2), -c2);
        trip.emplace_back(row, cin * nv + mesh.shift(v, dir, -2), c2);
      }
    }
  }
  SpMat D(nc_out * nv, nc_in * nv);
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

struct WeightSet {
  SpMat W, Winv, Whalf, Wihalf;
};

// block-diagonal inner-product weights on p-cochains and their inverse and
// square roots; blocks couple the components at one vertex
inline WeightSet weight_set(const Mesh& mesh, int p) {
  const int nv = mesh.nv(), nc = binomial(mesh.m, p);
  const auto& idx = increasing_indices(mesh.m, p);
  std::vector<Eigen::Triplet<double>> tw, twi, th, tih;
  const bool diag = trivial_metric(mesh);
  Eigen::MatrixXd R(nc, nc);
  for (int v = 0; v < nv; ++v) {
    const double vol = mesh.vol(v);
    if (diag) {
      for (int c = 0; c < nc; ++c) {
        const int a = c * nv + v;
        tw.emplace_back(a, a, vol);
        twi.emplace_back(a, a, 1.0 / vol);
        th.emplace_back(a, a, std::sqrt(vol));
        tih.emplace_back(a, a, 1.0 / std::sqrt(vol));
      }
      continue;
    }
    MatD gi = mesh.metric_inverse(v);
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j) R(i, j) = vol * subdet(gi, idx[i], idx[j], p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (R + R.transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw std::runtime_error("weight_set: inner-product block not positive");
    Eigen::VectorXd ev = es.eigenvalues();
    const Eigen::MatrixXd& U = es.eigenvectors();
    Eigen::MatrixXd Wb = U * ev.asDiagonal() * U.transpose();
    Eigen::MatrixXd Wbi = U * ev.cwiseInverse().asDiagonal() * U.transpose();
    Eigen::MatrixXd Wbh = U * ev.cwiseSqrt().asDiagonal() * U.transpose();
    Eigen::MatrixXd Wbih = U * ev.cwiseSqrt().cwiseInverse().asDiagonal() * U.transpose();
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j) {
        tw.emplace_back(i * nv + v, j * nv + v, Wb(i, j));
        twi.emplace_back(i * nv + v, j * nv + v, Wbi(i, j));
        th.emplace_back(i * nv + v, j * nv + v, Wbh(i, j));
        tih.emplace_back(i * nv + v, j * nv + v, Wbih(i, j));
      }
  }
  WeightSet ws;
  const int n = nc * nv;
  ws.W.resize(n, n);
  ws.Winv.resize(n, n);
  ws.Whalf.resize(n, n);
  ws.Wihalf.resize(n, n);
  ws.W.setFromTriplets(tw.begin(), tw.end());
  ws.Winv.setFromTriplets(twi.begin(), twi.end());
  ws.Whalf.setFromTriplets(th.begin(), th.end());
  ws.Wihalf.setFromTriplets(tih.begin(), tih.end());
  return ws;
}

inline std::vector<double> dense_spectrum(const SpMat& A) {
  Eigen::MatrixXd M(A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense_spectrum: eigensolver failed");
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + A.rows());
  std::sort(out.begin(), out.end());
  return out;
}

// smallest eigenvalues of a symmetric PSD sparse matrix by shift-inverted
// Lanczos (factor A + 1/2, full reorthogonalization)
inline std::vector<double> lanczos_smallest(const SpMat& A, int count,
                                            uint64_t seed) {
  const int n = int(A.rows());
  SpMat ident(n, n);
  ident.setIdentity();
  SpMat M = A + 0.5 * ident;
  Eigen::SimplicialLDLT<SpMat> solver(M);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("lanczos_smallest: factorization failed");
  const int K = std::min(n, std::max(3 * count + 30, 60));
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(K);
  Rng rng(seed);
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q[i] = rng.uniform(-1.0, 1.0);
  q.normalize();
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(n);
  double beta_prev = 0.0;
  std::vector<double> alpha, beta;
  for (int it = 0; it < K; ++it) {
    basis.push_back(q);
    Eigen::VectorXd w = solver.solve(q);
    const double a = q.dot(w);
    alpha.push_back(a);
    w -= a * q + beta_prev * prev;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b.dot(w) * b;
    const double bn = w.norm();
    if (bn < 1e-12) break;
    beta.push_back(bn);
    prev = q;
    q = w / bn;
    beta_prev = bn;
  }
  const int k = int(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  std::vector<double> lam;
  for (int i = 0; i < k; ++i) {
    const double mu = es.eigenvalues()[i];
    if (mu > 0.0) lam.push_back(1.0 / mu - 0.5);
  }
  std::sort(lam.begin(), lam.end());
  if (int(lam.size()) > count) lam.resize(count);
  return lam;
}

}  // namespace detail

struct LaplacianSpectra {
  int degree = 0;
  std::vector<double> laplacian;  // delta d + d delta on p-cochains
  std::vector<double> delta_d;    // delta d alone
  std::vector<double> d_delta;    // d delta alone
};

// count < 0 requests complete spectra (dense path only)
inline LaplacianSpectra laplacian_spectrum(const Mesh& mesh, int p,
                                           int count = -1,
                                           uint64_t seed = 0x5eed) {
  if (p < 0 || p > mesh.m)
    throw std::invalid_argument("laplacian_spectrum: degree out of range");
  const int nv = mesh.nv(), nc = binomial(mesh.m, p);
  const int n = nc * nv;
  if (n > kSparseEigenCap)
    throw resource_error("laplacian_spectrum: more than 20000 unknowns");
  detail::WeightSet wp = detail::weight_set(mesh, p);
  SpMat add(n, n), adelta(n, n);
  if (p < mesh.m) {
    SpMat D = detail::d_matrix(mesh, p);
    detail::WeightSet wq = detail::weight_set(mesh, p + 1);
    add = wp.Wihalf * SpMat(D.transpose()) * wq.W * D * wp.Wihalf;
  }
  if (p > 0) {
    SpMat Dm = detail::d_matrix(mesh, p - 1);
    detail::WeightSet wm = detail::weight_set(mesh, p - 1);
    adelta = wp.Whalf * Dm * wm.Winv * SpMat(Dm.transpose()) * wp.Whalf;
  }
  SpMat atot = add + adelta;
  LaplacianSpectra out;
  out.degree = p;
  if (n <= kDenseEigenCap && count < 0) {
    out.laplacian = detail::dense_spectrum(atot);
    out.delta_d = detail::dense_spectrum(add);
    out.d_delta = detail::dense_spectrum(adelta);
  } else {
    if (count <= 0)
      throw resource_error(
          "laplacian_spectrum: complete spectra need a dense-size problem; "
          "pass a positive count for iterative solves");
    if (n <= kDenseEigenCap) {
      auto cut = [count](std::vector<double> v) {
        if (int(v.size()) > count) v.resize(count);
        return v;
      };
      out.laplacian = cut(detail::dense_spectrum(atot));
      out.delta_d = cut(detail::dense_spectrum(add));
      out.d_delta = cut(detail::dense_spectrum(adelta));
    } else {
      out.laplacian = detail::lanczos_smallest(atot, count, derive_seed(seed, "lap"));
      out.delta_d = detail::lanczos_smallest(add, count, derive_seed(seed, "dd"));
      out.d_delta = detail::lanczos_smallest(adelta, count, derive_seed(seed, "ddl"));
    }
  }
  return out;
}

}  // namespace fhsc
