#pragma once

// Structured periodic meshes for the three domain families:
//
//   FlatTorus(m, sizes, periods)   coordinates x_d in [0, period_d), metric Id
//   SU2Euler(sizes)                Euler angles (a, b, c) on SU(2)
//   SphereProduct(sizes)           (phi1, theta1, phi2, theta2) on S^2 x S^2
//
// The angle charts of SU(2) and S^2 are not themselves periodic, so those
// meshes sample a periodic covering torus instead:
//
//   * SU2Euler uses q(a,b,c) = exp(a theta3) exp(b theta2) exp(c theta3) with
//     all three angles running over [0, 4pi).  Every matrix element of every
//     irrep is then a genuinely periodic lattice function (a 2pi shift of a
//     single angle flips the sign of q, which odd-weight representations
//     see), and the lattice covers the group 8 times.
//   * SphereProduct lets both polar angles run over [0, 2pi), covering the
//     product 4 times.
//
// Quadrature weights divide by the covering multiplicity, so sums over the
// lattice approximate integrals over the manifold itself.  Polar axes are
// offset by half a grid step (their sizes must be divisible by 4) so that no
// vertex lands on a chart singularity; the per-axis quadrature weight is the
// exact |sin| mass of the cell around each vertex, which keeps volumes and
// constant-density energies accurate to the stencil order rather than to the
// O(h^2) of pointwise |sin| weights (the kinks of |sin| sit exactly on cell
// boundaries).
//
// Orientation on a covering sheet where the chart reverses it is handled by
// the *signed* density (sin b, resp. sin theta1 sin theta2): the signed
// volume form is smooth and deck-invariant on the covering torus, so Hodge
// stars built from it map smooth fields to smooth fields and agree with the
// manifold's own star on every sheet.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fhsc/num.hpp"

namespace fhsc {


enum class MeshKind { FlatTorus, SU2Euler, SphereProduct };

// small dense matrix that never exceeds 4x4 (stack allocated)
using MatD = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

// --- quaternions and the SU(2) chart ---------------------------------------

struct Quat {
  double w = 1, x = 0, y = 0, z = 0;
};

inline Quat qmul(const Quat& p, const Quat& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

inline Quat qconj(const Quat& q) { return {q.w, -q.x, -q.y, -q.z}; }

// exp(t theta3) and exp(t theta2) as unit quaternions (theta_a = -e_a/2)
inline Quat quat_exp3(double t) { return {std::cos(0.5 * t), 0, 0, -std::sin(0.5 * t)}; }
inline Quat quat_exp2(double t) { return {std::cos(0.5 * t), 0, -std::sin(0.5 * t), 0}; }

inline Quat euler_quaternion(double a, double b, double c) {
  return qmul(qmul(quat_exp3(a), quat_exp2(b)), quat_exp3(c));
}

// 2x2 special-unitary matrix of a unit quaternion under e_a -> -i sigma_a,
// the same identification that makes quat_exp3(t) equal exp(t theta3)
inline Eigen::Matrix2cd su2_matrix(const Quat& q) {
  const std::complex<double> i(0, 1);
  Eigen::Matrix2cd u;
  u << q.w - i * q.z, -i * q.x - q.y, -i * q.x + q.y, q.w + i * q.z;
  return u;
}

// conjugation action q e_3 q^-1 as a unit 3-vector; for the Euler chart this
// is (-sin b cos a, sin b sin a, cos b), independent of c
inline Eigen::Vector3d rotate_e3(const Quat& q) {
  Quat r = qmul(qmul(q, Quat{0, 0, 0, 1}), qconj(q));
  return {r.x, r.y, r.z};
}

inline Eigen::Vector3d sphere_point(double phi, double theta) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

// --- the mesh ---------------------------------------------------------------

class Mesh {
 public:
  MeshKind kind = MeshKind::FlatTorus;
  int m = 0;  // dimension, 2..4

  // optional conformal factor (vertex field lambda > 0): metric lambda^2 g
  std::vector<double> conformal;
  // optional metric override g(x) for flat tori (tests of sharp/flat etc.)
  std::function<MatD(const std::array<double, 4>&)> metric_override;

  int size(int d) const { return sizes_[d]; }
  double spacing(int d) const { return h_[d]; }
  double period(int d) const { return period_[d]; }
  double covering() const { return covering_; }
  int nv() const { return nv_; }
  double max_spacing() const {
    double h = 0;
    for (int d = 0; d < m; ++d) h = std::max(h, h_[d]);
    return h;
  }

  void vertex_index(int v, int* idx) const {
    for (int d = 0; d < m; ++d) {
      idx[d] = v % sizes_[d];
      v /= sizes_[d];
    }
  }
  int vertex_of(const int* idx) const {
    int v = 0;
    for (int d = m - 1; d >= 0; --d) v = v * sizes_[d] + idx[d];
    return v;
  }
  // periodic shift along axis d by `steps` grid points
  int shift(int v, int d, int steps) const {
    int i = (v / stride_[d]) % sizes_[d];
    int j = i + steps;
    j %= sizes_[d];
    if (j < 0) j += sizes_[d];
    return v + (j - i) * stride_[d];
  }

  double coord(int v, int d) const {
    int i = (v / stride_[d]) % sizes_[d];
    return (i + offset_[d]) * h_[d];
  }
  std::array<double, 4> coords(int v) const {
    std::array<double, 4> x{0, 0, 0, 0};
    int idx[4];
    vertex_index(v, idx);
    for (int d = 0; d < m; ++d) x[d] = (idx[d] + offset_[d]) * h_[d];
    return x;
  }

  double lambda(int v) const { return conformal.empty() ? 1.0 : conformal[v]; }

  // metric in the coordinate frame at vertex v (includes conformal factor)
  MatD metric(int v) const {
    MatD g = base_metric(coords(v));
    double l = lambda(v);
    if (l != 1.0) g *= l * l;
    return g;
  }
  MatD metric_inverse(int v) const {
    MatD g = base_metric(coords(v));
    MatD gi = g.inverse();
    double l = lambda(v);
    if (l != 1.0) gi /= l * l;
    return gi;
  }

  // signed volume density in the coordinate orientation (smooth across the
  // covering seams); |signed_density| = sqrt(det g)
  double signed_density(int v) const {
    std::array<double, 4> x = coords(v);
    double s;
    switch (kind) {
      case MeshKind::FlatTorus:
        s = metric_override ? std::sqrt(base_metric(x).determinant()) : 1.0;
        break;
      case MeshKind::SU2Euler:
        s = std::sin(x[1]);
        break;
      case MeshKind::SphereProduct:
        s = std::sin(x[1]) * std::sin(x[3]);
        break;
      default:
        s = 1.0;
    }
    double l = lambda(v);
    if (l != 1.0) {
      double lm = 1.0;
      for (int d = 0; d < m; ++d) lm *= l;
      s *= lm;
    }
    return s;
  }

  // quadrature weight of the vertex cell (positive, covering-adjusted)
  double vol(int v) const {
    double w;
    if (metric_override) {
      w = std::sqrt(base_metric(coords(v)).determinant());
      for (int d = 0; d < m; ++d) w *= h_[d];
    } else {
      w = 1.0;
      int idx[4];
      vertex_index(v, idx);
      for (int d = 0; d < m; ++d) w *= cell_mass_[d][idx[d]];
    }
    double l = lambda(v);
    if (l != 1.0)
      for (int d = 0; d < m; ++d) w *= l;
    return w / covering_;
  }

  // total quadrature mass (the discrete volume of the manifold)
  double volume() const {
    long double s = 0;
    for (int v = 0; v < nv_; ++v) s += vol(v);
    return double(s);
  }

  // left-invariant frame of SU2Euler meshes: row i holds the coordinate
  // components of theta_i at vertex v
  Eigen::Matrix3d frame(int v) const {
    if (kind != MeshKind::SU2Euler)
      throw std::invalid_argument("frame: mesh has no distinguished frame");
    std::array<double, 4> x = coords(v);
    const double sb = std::sin(x[1]), cb = std::cos(x[1]);
    const double sc = std::sin(x[2]), cc = std::cos(x[2]);
    Eigen::Matrix3d e;
    e << cc / sb, -sc, -cb * cc / sb,
         sc / sb,  cc, -cb * sc / sb,
         0,        0,  1;
    return e;
  }

  Quat quaternion(int v) const {
    if (kind != MeshKind::SU2Euler)
      throw std::invalid_argument("quaternion: not an SU2Euler mesh");
    std::array<double, 4> x = coords(v);
    return euler_quaternion(x[0], x[1], x[2]);
  }

  bool polar_axis(int d) const { return offset_[d] != 0.0; }

  void attach_conformal(std::vector<double> lam) {
    if (int(lam.size()) != nv_)
      throw std::invalid_argument("attach_conformal: field size mismatch");
    for (double l : lam)
      if (!(l > 0.0))
        throw std::invalid_argument("attach_conformal: factor must be positive");
    conformal = std::move(lam);
  }

  void attach_metric_override(
      std::function<MatD(const std::array<double, 4>&)> g) {
    if (kind != MeshKind::FlatTorus)
      throw std::invalid_argument(
          "attach_metric_override: only flat-torus meshes accept one");
    metric_override = std::move(g);
    for (int v = 0; v < nv_; ++v) {
      MatD gv = base_metric(coords(v));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gv);
      if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument(
            "attach_metric_override: metric must be positive definite");
    }
  }

  static Mesh flat_torus(int m, const std::array<int, 4>& sizes,
                         const std::array<double, 4>& periods);
  static Mesh flat_torus(int m, int n);  // uniform n^m, unit periods
  static Mesh su2_euler(const std::array<int, 3>& sizes);
  static Mesh su2_euler(int n) { return su2_euler({n, n, n}); }
  static Mesh sphere_product(const std::array<int, 4>& sizes);

 private:
  std::array<int, 4> sizes_{1, 1, 1, 1};
  std::array<double, 4> period_{1, 1, 1, 1};
  std::array<double, 4> h_{1, 1, 1, 1};
  std::array<double, 4> offset_{0, 0, 0, 0};  // in units of h
  std::array<int, 4> stride_{1, 1, 1, 1};
  std::array<std::vector<double>, 4> cell_mass_;  // per-axis quadrature mass
  double covering_ = 1.0;
  int nv_ = 0;

  MatD base_metric(const std::array<double, 4>& x) const {
    if (metric_override) return metric_override(x);
    MatD g = MatD::Identity(m, m);
    switch (kind) {
      case MeshKind::FlatTorus:
        break;
      case MeshKind::SU2Euler:
        g(0, 2) = g(2, 0) = std::cos(x[1]);
        break;
      case MeshKind::SphereProduct: {
        double s1 = std::sin(x[1]), s2 = std::sin(x[3]);
        g(0, 0) = s1 * s1;
        g(2, 2) = s2 * s2;
        break;
      }
    }
    return g;
  }

  void finish(bool polar_sines) {
    nv_ = 1;
    for (int d = 0; d < m; ++d) {
      if (sizes_[d] < 4)
        throw std::invalid_argument("mesh: all grid sizes must be >= 4");
      stride_[d] = nv_;
      nv_ *= sizes_[d];
      h_[d] = period_[d] / sizes_[d];
      cell_mass_[d].assign(sizes_[d], h_[d]);
      if (offset_[d] != 0.0) {
        if (sizes_[d] % 4 != 0)
          throw std::invalid_argument(
              "mesh: polar axis sizes must be divisible by 4");
        if (polar_sines)
          for (int i = 0; i < sizes_[d]; ++i) {
            // cell [i h, (i+1) h] around the offset vertex; sin has constant
            // sign inside (multiples of pi fall on cell boundaries)
            double lo = i * h_[d], hi = (i + 1) * h_[d];
            cell_mass_[d][i] = std::abs(std::cos(lo) - std::cos(hi));
          }
      }
    }
  }
};

inline Mesh Mesh::flat_torus(int m, const std::array<int, 4>& sizes,
                             const std::array<double, 4>& periods) {
  if (m < 2 || m > kMaxDim)
    throw std::invalid_argument("flat_torus: dimension must be 2, 3, or 4");
  Mesh mesh;
  mesh.kind = MeshKind::FlatTorus;
  mesh.m = m;
  for (int d = 0; d < m; ++d) {
    if (!(periods[d] > 0))
      throw std::invalid_argument("flat_torus: periods must be positive");
    mesh.sizes_[d] = sizes[d];
    mesh.period_[d] = periods[d];
  }
  mesh.finish(false);
  return mesh;
}

inline Mesh Mesh::flat_torus(int m, int n) {
  return flat_torus(m, {n, n, n, n}, {1, 1, 1, 1});
}

inline Mesh Mesh::su2_euler(const std::array<int, 3>& sizes) {
  Mesh mesh;
  mesh.kind = MeshKind::SU2Euler;
  mesh.m = 3;
  for (int d = 0; d < 3; ++d) {
    mesh.sizes_[d] = sizes[d];
    mesh.period_[d] = 4 * kPi;
  }
  mesh.offset_[1] = 0.5;
  mesh.covering_ = 8.0;
  mesh.finish(true);
  return mesh;
}

inline Mesh Mesh::sphere_product(const std::array<int, 4>& sizes) {
  Mesh mesh;
  mesh.kind = MeshKind::SphereProduct;
  mesh.m = 4;
  for (int d = 0; d < 4; ++d) {
    mesh.sizes_[d] = sizes[d];
    mesh.period_[d] = 2 * kPi;
  }
  mesh.offset_[1] = mesh.offset_[3] = 0.5;
  mesh.covering_ = 4.0;
  mesh.finish(true);
  return mesh;
}

}  // namespace fhsc
