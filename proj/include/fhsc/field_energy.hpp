#pragma once

// Discrete maps into Kahler targets and the variational calculus of
//
//     E(phi) = 1/2 || phi^* omega ||^2_{L^2}.
//
// Maps store one target point per mesh vertex.  Torus-valued components are
// differentiated through the nearest lift (the difference representative in
// (-1/2, 1/2]), which makes linear torus maps exactly differentiable;
// sphere-valued components are differentiated in the ambient R^3.
//
// Provided operations: pullback of the target Kahler form, the energy (in
// streaming form, so large product grids never materialize the pullback),
// the Euler-Lagrange residual S(phi) = -J dphi(Z_phi) with
// Z_phi = sharp(delta phi^* omega), first-variation and Hessian checks,
// conformal invariance of the 4-dimensional energy, the 2d and 4d
// topological lower bounds, a backtracking gradient descent, and the
// matrix-element eigenfunction check on SU(2) meshes.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhsc/dec.hpp"
#include "fhsc/hopf_spectra.hpp"
#include "fhsc/mesh.hpp"
#include "fhsc/num.hpp"
#include "fhsc/su2.hpp"
#include "fhsc/targets.hpp"

namespace fhsc {

struct DiscreteMap {
  const Mesh* mesh = nullptr;
  TargetKind target = TargetKind::FlatTorus2;
  int vdim = 0;
  std::vector<double> values;  // component-major, like cochains

  DiscreteMap() = default;
  DiscreteMap(const Mesh& msh, TargetKind t) : mesh(&msh), target(t) {
    vdim = target_value_dim(t);
    values.assign(size_t(vdim) * size_t(msh.nv()), 0.0);
  }
  double& at(int c, int v) { return values[size_t(c) * mesh->nv() + v]; }
  double at(int c, int v) const { return values[size_t(c) * mesh->nv() + v]; }
  double* component(int c) { return values.data() + size_t(c) * mesh->nv(); }
  const double* component(int c) const {
    return values.data() + size_t(c) * mesh->nv();
  }
  void point(int v, double* out) const {
    for (int c = 0; c < vdim; ++c) out[c] = at(c, v);
  }
};

struct VariationField {
  TargetKind target = TargetKind::FlatTorus2;
  int vdim = 0;
  std::vector<double> values;  // tangent vectors, component-major

  VariationField() = default;
  explicit VariationField(const DiscreteMap& f) : target(f.target), vdim(f.vdim) {
    values.assign(f.values.size(), 0.0);
  }
  double& at(int c, int v, int nv) { return values[size_t(c) * nv + v]; }
  double get(int c, int v, int nv) const { return values[size_t(c) * nv + v]; }
  void vector(int v, int nv, double* out) const {
    for (int c = 0; c < vdim; ++c) out[c] = values[size_t(c) * nv + v];
  }
};

// --- map builders -----------------------------------------------------------

template <class F>
DiscreteMap map_from_function(const Mesh& mesh, TargetKind target, F&& fn) {
  DiscreteMap f(mesh, target);
  std::vector<double> buf(f.vdim);
  for (int v = 0; v < mesh.nv(); ++v) {
    fn(mesh.coords(v), buf.data());
    target_normalize(target, buf.data());
    for (int c = 0; c < f.vdim; ++c) f.at(c, v) = buf[c];
  }
  return f;
}

inline DiscreteMap identity_torus_map(const Mesh& mesh) {
  if (mesh.kind != MeshKind::FlatTorus || (mesh.m != 2 && mesh.m != 4))
    throw std::invalid_argument("identity_torus_map: needs a flat 2- or 4-torus");
  for (int d = 0; d < mesh.m; ++d)
    if (mesh.period(d) != 1.0)
      throw std::invalid_argument("identity_torus_map: domain must have unit periods");
  TargetKind t = mesh.m == 2 ? TargetKind::FlatTorus2 : TargetKind::FlatTorus4;
  const int m = mesh.m;
  return map_from_function(mesh, t, [m](const std::array<double, 4>& x, double* out) {
    for (int c = 0; c < m; ++c) out[c] = x[c];
  });
}

// x -> L x on the unit torus; L integer so the map is well defined
inline DiscreteMap linear_torus_map(const Mesh& mesh, const Eigen::MatrixXi& L) {
  if (mesh.kind != MeshKind::FlatTorus || (mesh.m != 2 && mesh.m != 4))
    throw std::invalid_argument("linear_torus_map: needs a flat 2- or 4-torus");
  if (L.rows() != mesh.m || L.cols() != mesh.m)
    throw std::invalid_argument("linear_torus_map: matrix shape mismatch");
  TargetKind t = mesh.m == 2 ? TargetKind::FlatTorus2 : TargetKind::FlatTorus4;
  const int m = mesh.m;
  return map_from_function(mesh, t, [&L, m](const std::array<double, 4>& x, double* out) {
    for (int r = 0; r < m; ++r) {
      out[r] = 0;
      for (int c = 0; c < m; ++c) out[r] += L(r, c) * x[c];
    }
  });
}

inline DiscreteMap constant_map(const Mesh& mesh, TargetKind target,
                                const std::vector<double>& point) {
  if (int(point.size()) != target_value_dim(target))
    throw std::invalid_argument("constant_map: point has wrong dimension");
  return map_from_function(mesh, target,
                           [&point](const std::array<double, 4>&, double* out) {
                             for (size_t c = 0; c < point.size(); ++c) out[c] = point[c];
                           });
}

// q -> q e_3 q^{-1} from the SU(2) Euler mesh to the unit sphere
inline DiscreteMap hopf_map(const Mesh& mesh) {
  if (mesh.kind != MeshKind::SU2Euler)
    throw std::invalid_argument("hopf_map: needs an SU2Euler mesh");
  return map_from_function(mesh, TargetKind::SphereS2,
                           [](const std::array<double, 4>& x, double* out) {
                             Eigen::Vector3d p = rotate_e3(euler_quaternion(x[0], x[1], x[2]));
                             out[0] = p[0];
                             out[1] = p[1];
                             out[2] = p[2];
                           });
}

// projection of S^2 x S^2 onto its first factor
inline DiscreteMap product_projection_map(const Mesh& mesh) {
  if (mesh.kind != MeshKind::SphereProduct)
    throw std::invalid_argument("product_projection_map: needs a sphere-product mesh");
  return map_from_function(mesh, TargetKind::SphereS2,
                           [](const std::array<double, 4>& x, double* out) {
                             Eigen::Vector3d p = sphere_point(x[0], x[1]);
                             out[0] = p[0];
                             out[1] = p[1];
                             out[2] = p[2];
                           });
}

inline DiscreteMap product_identity_map(const Mesh& mesh) {
  if (mesh.kind != MeshKind::SphereProduct)
    throw std::invalid_argument("product_identity_map: needs a sphere-product mesh");
  return map_from_function(mesh, TargetKind::ProductS2S2,
                           [](const std::array<double, 4>& x, double* out) {
                             Eigen::Vector3d p = sphere_point(x[0], x[1]);
                             Eigen::Vector3d q = sphere_point(x[2], x[3]);
                             for (int i = 0; i < 3; ++i) {
                               out[i] = p[i];
                               out[3 + i] = q[i];
                             }
                           });
}

// --- differentiation --------------------------------------------------------

// d phi / d x_d of one value component; torus components use the nearest lift
inline double map_diff(const DiscreteMap& f, int c, int v, int d) {
  const Mesh& mesh = *f.mesh;
  const double* vals = f.component(c);
  if (target_wraps(f.target)) {
    // lift the circle values by chaining nearest differences of ADJACENT
    // samples: a single remainder across the wide arm would pick the wrong
    // branch as soon as the map moves more than half a period over 2h
    auto step = [&](int a, int b) {
      return std::remainder(vals[mesh.shift(v, d, a)] - vals[mesh.shift(v, d, b)],
                            1.0);
    };
    const double p1 = step(1, 0), m1 = step(-1, 0);
    const double p2 = p1 + step(2, 1);
    const double m2 = m1 + step(-2, -1);
    return (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * mesh.spacing(d));
  }
  return stencil_diff(mesh, vals, v, d);
}

// all value components of d phi along axis d at vertex v
inline void map_derivative(const DiscreteMap& f, int v, int d, double* out) {
  for (int c = 0; c < f.vdim; ++c) out[c] = map_diff(f, c, v, d);
}

// --- pullback and energy ----------------------------------------------------

inline Cochain pullback_kahler(const DiscreteMap& f) {
  const Mesh& mesh = *f.mesh;
  Cochain pb(mesh, 2);
  const auto& idx = increasing_indices(mesh.m, 2);
  double du[kMaxDim][6], p[6];
  for (int v = 0; v < mesh.nv(); ++v) {
    f.point(v, p);
    for (int d = 0; d < mesh.m; ++d) map_derivative(f, v, d, du[d]);
    for (int c = 0; c < pb.ncomp; ++c)
      pb.at(c, v) = target_omega(f.target, p, du[idx[c][0]], du[idx[c][1]]);
  }
  return pb;
}

// streaming evaluation of E(phi): no cochain is materialized
inline double energy(const DiscreteMap& f) {
  const Mesh& mesh = *f.mesh;
  const auto& idx = increasing_indices(mesh.m, 2);
  const int ncomp = binomial(mesh.m, 2);
  const bool trivial = detail::trivial_metric(mesh);
  double du[kMaxDim][6], p[6], pb[6], raised[6];
  long double acc = 0.0;
  for (int v = 0; v < mesh.nv(); ++v) {
    f.point(v, p);
    for (int d = 0; d < mesh.m; ++d) map_derivative(f, v, d, du[d]);
    for (int c = 0; c < ncomp; ++c)
      pb[c] = target_omega(f.target, p, du[idx[c][0]], du[idx[c][1]]);
    long double s = 0.0;
    if (trivial) {
      for (int c = 0; c < ncomp; ++c) s += (long double)(pb[c]) * pb[c];
    } else {
      MatD gi = mesh.metric_inverse(v);
      for (int i = 0; i < ncomp; ++i) {
        raised[i] = 0.0;
        for (int j = 0; j < ncomp; ++j)
          raised[i] += detail::subdet(gi, idx[i], idx[j], 2) * pb[j];
      }
      for (int c = 0; c < ncomp; ++c) s += (long double)(raised[c]) * pb[c];
    }
    acc += s * mesh.vol(v);
  }
  return 0.5 * double(acc);
}

// --- variations -------------------------------------------------------------

template <class F>
VariationField variation_from_function(const DiscreteMap& f, F&& fn) {
  const Mesh& mesh = *f.mesh;
  VariationField x(f);
  std::vector<double> amb(f.vdim), tan(f.vdim), p(f.vdim);
  for (int v = 0; v < mesh.nv(); ++v) {
    f.point(v, p.data());
    fn(mesh.coords(v), p.data(), amb.data());
    target_project(f.target, p.data(), amb.data(), tan.data());
    for (int c = 0; c < f.vdim; ++c) x.at(c, v, mesh.nv()) = tan[c];
  }
  return x;
}

inline double variation_inner(const DiscreteMap& f, const VariationField& a,
                              const VariationField& b) {
  const Mesh& mesh = *f.mesh;
  long double acc = 0.0;
  double ua[6], ub[6];
  for (int v = 0; v < mesh.nv(); ++v) {
    a.vector(v, mesh.nv(), ua);
    b.vector(v, mesh.nv(), ub);
    acc += (long double)(target_h(f.target, ua, ub)) * mesh.vol(v);
  }
  return double(acc);
}

inline double variation_norm(const DiscreteMap& f, const VariationField& a) {
  return std::sqrt(std::max(0.0, variation_inner(f, a, a)));
}

// exp_phi(t X): deform the map along the variation field
inline DiscreteMap deformed(const DiscreteMap& f, const VariationField& x,
                            double t) {
  const Mesh& mesh = *f.mesh;
  DiscreteMap g(mesh, f.target);
  double p[6], tan[6], out[6];
  for (int v = 0; v < mesh.nv(); ++v) {
    f.point(v, p);
    x.vector(v, mesh.nv(), tan);
    for (int c = 0; c < f.vdim; ++c) tan[c] *= t;
    target_exp(f.target, p, tan, out);
    for (int c = 0; c < f.vdim; ++c) g.at(c, v) = out[c];
  }
  return g;
}

// --- Euler-Lagrange residual ------------------------------------------------

inline double criticality_threshold(const Mesh& mesh, double scale = 1.0) {
  const double h = mesh.max_spacing();
  return 10.0 * h * h * scale;
}

struct ResidualReport {
  VectorField z;            // domain field Z_phi = sharp(delta phi^* omega)
  VariationField residual;  // S(phi) = -J dphi(Z_phi)
  double residual_norm = 0.0;
  double threshold = 0.0;
  bool critical = false;
};

inline ResidualReport el_residual(const DiscreteMap& f, double threshold_scale = 1.0) {
  const Mesh& mesh = *f.mesh;
  ResidualReport rep;
  rep.z = sharp(codifferential(pullback_kahler(f)));
  rep.residual = VariationField(f);
  double p[6], du[6], w[6], jw[6], tan[6];
  long double acc = 0.0;
  for (int v = 0; v < mesh.nv(); ++v) {
    f.point(v, p);
    for (int c = 0; c < f.vdim; ++c) w[c] = 0.0;
    for (int d = 0; d < mesh.m; ++d) {
      const double zd = rep.z.at(d, v);
      if (zd == 0.0) continue;
      map_derivative(f, v, d, du);
      for (int c = 0; c < f.vdim; ++c) w[c] += zd * du[c];
    }
    target_J(f.target, p, w, jw);
    for (int c = 0; c < f.vdim; ++c) jw[c] = -jw[c];
    target_project(f.target, p, jw, tan);
    for (int c = 0; c < f.vdim; ++c) rep.residual.at(c, v, mesh.nv()) = tan[c];
    acc += (long double)(target_h(f.target, tan, tan)) * mesh.vol(v);
  }
  rep.residual_norm = std::sqrt(std::max(0.0, double(acc)));
  rep.threshold = criticality_threshold(mesh, threshold_scale);
  rep.critical = rep.residual_norm < rep.threshold;
  return rep;
}

// --- first and second variation ---------------------------------------------

struct FirstVariation {
  double fd_derivative = 0.0;
  double formula_value = 0.0;
  double abs_gap = 0.0;
};

inline FirstVariation first_variation_check(const DiscreteMap& f,
                                            const VariationField& x, double eps) {
  if (!(eps >= 1e-7 && eps <= 1e-2))
    throw std::invalid_argument("first_variation_check: eps outside [1e-7, 1e-2]");
  const Mesh& mesh = *f.mesh;
  FirstVariation out;
  out.fd_derivative =
      (energy(deformed(f, x, eps)) - energy(deformed(f, x, -eps))) / (2.0 * eps);
  ResidualReport rep = el_residual(f);
  // formula: sum omega(X, dphi(Z)) vol
  double p[6], du[6], w[6], xv[6];
  long double acc = 0.0;
  for (int v = 0; v < mesh.nv(); ++v) {
    f.point(v, p);
    for (int c = 0; c < f.vdim; ++c) w[c] = 0.0;
    for (int d = 0; d < mesh.m; ++d) {
      const double zd = rep.z.at(d, v);
      if (zd == 0.0) continue;
      map_derivative(f, v, d, du);
      for (int c = 0; c < f.vdim; ++c) w[c] += zd * du[c];
    }
    x.vector(v, mesh.nv(), xv);
    acc += (long double)(target_omega(f.target, p, xv, w)) * mesh.vol(v);
  }
  out.formula_value = double(acc);
  out.abs_gap = std::abs(out.fd_derivative - out.formula_value);
  return out;
}

struct HessianValue {
  double total = 0.0;
  double flow_term = 0.0;  // integral of omega(Y, nabla_Z Y)
  double norm_term = 0.0;  // || d phi^*(iota_Y omega) ||^2
};

inline HessianValue hessian_quadratic(const DiscreteMap& f,
                                      const VariationField& y,
                                      double threshold_scale = 1.0) {
  const Mesh& mesh = *f.mesh;
  ResidualReport rep = el_residual(f, threshold_scale);
  if (!rep.critical)
    throw std::invalid_argument(
        "hessian_quadratic: map is not critical (residual above threshold)");
  // 1-form phi^*(iota_Y omega):  c_d = omega(Y, d_d phi)
  Cochain iy(mesh, 1);
  double p[6], du[6], yv[6];
  for (int v = 0; v < mesh.nv(); ++v) {
    f.point(v, p);
    y.vector(v, mesh.nv(), yv);
    for (int d = 0; d < mesh.m; ++d) {
      map_derivative(f, v, d, du);
      iy.at(d, v) = target_omega(f.target, p, yv, du);
    }
  }
  Cochain diy = exterior_d(iy);
  HessianValue h;
  h.norm_term = l2_inner(diy, diy);
  // flow term: ambient directional derivative of Y along Z, projected back
  double dy[6], proj[6];
  long double acc = 0.0;
  for (int v = 0; v < mesh.nv(); ++v) {
    f.point(v, p);
    for (int c = 0; c < f.vdim; ++c) dy[c] = 0.0;
    for (int d = 0; d < mesh.m; ++d) {
      const double zd = rep.z.at(d, v);
      if (zd == 0.0) continue;
      for (int c = 0; c < f.vdim; ++c)
        dy[c] += zd * stencil_diff(mesh, y.values.data() + size_t(c) * mesh.nv(), v, d);
    }
    target_project(f.target, p, dy, proj);
    y.vector(v, mesh.nv(), yv);
    acc += (long double)(target_omega(f.target, p, yv, proj)) * mesh.vol(v);
  }
  h.flow_term = double(acc);
  h.total = h.flow_term + h.norm_term;
  return h;
}

// --- conformal invariance ----------------------------------------------------

struct ConformalCheck {
  double base_energy = 0.0;
  double scaled_energy = 0.0;
  double abs_gap = 0.0;
};

inline ConformalCheck conformal_invariance_check(const DiscreteMap& f,
                                                 const std::vector<double>& lambda) {
  if (f.mesh->m != 4)
    throw std::invalid_argument("conformal_invariance_check: domain must be 4d");
  Mesh base = *f.mesh;
  base.conformal.clear();
  Mesh scaled = base;
  scaled.attach_conformal(lambda);
  DiscreteMap fb = f;
  fb.mesh = &base;
  DiscreteMap fs = f;
  fs.mesh = &scaled;
  ConformalCheck out;
  out.base_energy = energy(fb);
  out.scaled_energy = energy(fs);
  out.abs_gap = std::abs(out.base_energy - out.scaled_energy);
  return out;
}

// --- topological bounds -----------------------------------------------------

struct Bound2d {
  double energy = 0.0;
  double integral = 0.0;  // of phi^* omega over the surface
  double bound = 0.0;     // integral^2 / (2 Vol)
  double gap = 0.0;
};

inline Bound2d bound_2d(const DiscreteMap& f) {
  const Mesh& mesh = *f.mesh;
  if (mesh.m != 2) throw std::invalid_argument("bound_2d: domain must be 2d");
  Cochain pb = pullback_kahler(f);
  Bound2d out;
  long double total = 0.0;
  const double cell = mesh.spacing(0) * mesh.spacing(1) / mesh.covering();
  for (int v = 0; v < mesh.nv(); ++v) total += pb.at(0, v) * cell;
  out.integral = double(total);
  out.energy = energy(f);
  out.bound = out.integral * out.integral / (2.0 * mesh.volume());
  out.gap = out.energy - out.bound;
  return out;
}

struct SelfdualSplit {
  Cochain plus, minus;
};

inline SelfdualSplit selfdual_split(const Cochain& a) {
  if (a.mesh->m != 4 || a.degree != 2)
    throw std::invalid_argument("selfdual_split: needs a 2-form on a 4d mesh");
  Cochain sa = hodge_star(a);
  SelfdualSplit out{a, a};
  for (size_t i = 0; i < a.values.size(); ++i) {
    out.plus.values[i] = 0.5 * (a.values[i] + sa.values[i]);
    out.minus.values[i] = 0.5 * (a.values[i] - sa.values[i]);
  }
  return out;
}

struct Bound4d {
  double energy = 0.0;
  double integral = 0.0;  // of phi^*(omega ^ omega)
  double bound = 0.0;     // |integral| / 2
  double gap = 0.0;
  double plus_norm2 = 0.0;
  double minus_norm2 = 0.0;
  std::string which_side;  // self_dual / anti_self_dual / neither
};

inline Bound4d bound_4d(const DiscreteMap& f) {
  const Mesh& mesh = *f.mesh;
  if (mesh.m != 4) throw std::invalid_argument("bound_4d: domain must be 4d");
  Cochain pb = pullback_kahler(f);
  Bound4d out;
  out.integral = l2_inner(pb, hodge_star(pb));
  out.bound = 0.5 * std::abs(out.integral);
  out.energy = energy(f);
  out.gap = out.energy - out.bound;
  SelfdualSplit split = selfdual_split(pb);
  out.plus_norm2 = l2_inner(split.plus, split.plus);
  out.minus_norm2 = l2_inner(split.minus, split.minus);
  const double scale = out.plus_norm2 + out.minus_norm2;
  if (out.minus_norm2 <= 1e-8 * scale)
    out.which_side = "self_dual";
  else if (out.plus_norm2 <= 1e-8 * scale)
    out.which_side = "anti_self_dual";
  else
    out.which_side = "neither";
  return out;
}

// --- gradient flow ----------------------------------------------------------

struct FlowStep {
  int step = 0;
  double energy = 0.0;
  double residual_norm = 0.0;
  double dt = 0.0;
};

inline std::vector<FlowStep> gradient_flow(DiscreteMap f, int steps, double dt,
                                           double threshold_scale = 1.0) {
  if (!(dt > 0.0) || steps < 1)
    throw std::invalid_argument("gradient_flow: need dt > 0 and steps >= 1");
  std::vector<FlowStep> traj;
  double e = energy(f);
  ResidualReport rep = el_residual(f, threshold_scale);
  traj.push_back({0, e, rep.residual_norm, dt});
  for (int s = 1; s <= steps; ++s) {
    if (rep.residual_norm < rep.threshold) break;  // already critical
    for (;;) {
      DiscreteMap trial = deformed(f, rep.residual, -dt);
      for (int v = 0; v < trial.mesh->nv(); ++v) {
        double p[6];
        trial.point(v, p);
        target_normalize(trial.target, p);
        for (int c = 0; c < trial.vdim; ++c) trial.at(c, v) = p[c];
      }
      const double e_trial = energy(trial);
      if (e_trial <= e) {
        f = std::move(trial);
        e = e_trial;
        break;
      }
      dt *= 0.5;
      if (dt < 1e-12)
        throw std::runtime_error("gradient_flow: step size underflow");
    }
    rep = el_residual(f, threshold_scale);
    traj.push_back({s, e, rep.residual_norm, dt});
  }
  return traj;
}

// --- matrix-element eigenfunction check on SU(2) meshes ----------------------

// discrete left-invariant frame derivative of a vertex scalar
inline std::vector<double> frame_derivative(const Mesh& mesh,
                                            const std::vector<double>& fld,
                                            int axis) {
  if (mesh.kind != MeshKind::SU2Euler)
    throw std::invalid_argument("frame_derivative: needs an SU2Euler mesh");
  std::vector<double> out(mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) {
    Eigen::Matrix3d e = mesh.frame(v);
    double s = 0.0;
    for (int d = 0; d < 3; ++d)
      if (e(axis - 1, d) != 0.0) s += e(axis - 1, d) * stencil_diff(mesh, fld.data(), v, d);
    out[v] = s;
  }
  return out;
}

struct PeterWeylResult {
  int n = 0, k = 0, l = 0;
  double predicted = 0.0;
  double estimate = 0.0;
  double abs_error = 0.0;
};

// Rayleigh quotient of the vertical Hessian on the section built from the
// matrix element pi_kl of the weight-n irrep, against the closed form
// (n - 2k)^2 / 4
inline PeterWeylResult peter_weyl_check(const Mesh& mesh, int n, int k, int l) {
  if (mesh.kind != MeshKind::SU2Euler)
    throw std::invalid_argument("peter_weyl_check: needs an SU2Euler mesh");
  if (k < 0 || k > n || l < 0 || l > n)
    throw std::invalid_argument("peter_weyl_check: weight index out of range");
  Irrep irr = build_irrep(n);
  const double lam = a_block_eigenvalue(n, k);
  if (lam == 0.0)
    throw std::invalid_argument("peter_weyl_check: vertical eigenvalue vanishes");
  const int nv = mesh.nv();
  using CVec = std::vector<std::complex<double>>;
  CVec f1(nv), f2(nv);
  for (int v = 0; v < nv; ++v) {
    Mat lift = rep_lift(irr, su2_matrix(mesh.quaternion(v)));
    const complexd t1 = theta_matrix_element(irr, 1, k, l, lift);
    const complexd t2 = theta_matrix_element(irr, 2, k, l, lift);
    f1[v] = t2 / lam;
    f2[v] = -t1 / lam;
  }
  auto frame_d = [&mesh, nv](const CVec& fld, int axis) {
    CVec out(nv);
    for (int v = 0; v < nv; ++v) {
      Eigen::Matrix3d e = mesh.frame(v);
      complexd s(0, 0);
      for (int d = 0; d < 3; ++d) {
        if (e(axis - 1, d) == 0.0) continue;
        const complexd d1 = fld[mesh.shift(v, d, 1)] - fld[mesh.shift(v, d, -1)];
        const complexd d2 = fld[mesh.shift(v, d, 2)] - fld[mesh.shift(v, d, -2)];
        s += e(axis - 1, d) * (8.0 * d1 - d2) / (12.0 * mesh.spacing(d));
      }
      out[v] = s;
    }
    return out;
  };
  CVec e1f1 = frame_d(f1, 1), e2f2 = frame_d(f2, 2);
  CVec l11 = frame_d(e1f1, 1);            // theta1^2 f1
  CVec l33_1 = frame_d(frame_d(f1, 3), 3);  // theta3^2 f1
  CVec e3f2 = frame_d(f2, 3);
  CVec l12 = frame_d(e2f2, 1);            // theta1 theta2 f2
  CVec e3f1 = frame_d(f1, 3);
  CVec l21 = frame_d(e1f1, 2);            // theta2 theta1 f1
  CVec l22 = frame_d(e2f2, 2);            // theta2^2 f2
  CVec l33_2 = frame_d(frame_d(f2, 3), 3);  // theta3^2 f2
  long double num = 0.0, den = 0.0;
  for (int v = 0; v < nv; ++v) {
    const complexd ly1 = -l11[v] - l33_1[v] - e3f2[v] - l12[v];
    const complexd ly2 = e3f1[v] - l21[v] - l22[v] - l33_2[v];
    const double w = mesh.vol(v);
    num += w * (std::conj(f1[v]) * ly1 + std::conj(f2[v]) * ly2).real();
    den += w * (std::norm(f1[v]) + std::norm(f2[v]));
  }
  PeterWeylResult out;
  out.n = n;
  out.k = k;
  out.l = l;
  out.predicted = 0.25 * double(n - 2 * k) * double(n - 2 * k);
  out.estimate = double(num / den);
  out.abs_error = std::abs(out.estimate - out.predicted);
  return out;
}

}  // namespace fhsc
