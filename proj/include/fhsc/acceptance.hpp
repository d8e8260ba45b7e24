#pragma once

// End-to-end verification battery: ten numbered criteria covering the block
// spectra, the deformation-threshold bisection, the reduced ODE profile, the
// reference energies, criticality residuals, conformal invariance, the
// topological bounds, the Laplacian spectra, variation consistency, and the
// matrix-element Rayleigh quotients.  Tolerances are pinned here, in code.
//
// The battery is shared by the dedicated acceptance binary and the CLI
// `suite` command; each criterion reports one pass/fail line.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fhsc/dec.hpp"
#include "fhsc/field_energy.hpp"
#include "fhsc/hopf_spectra.hpp"
#include "fhsc/laplacian.hpp"
#include "fhsc/mesh.hpp"
#include "fhsc/num.hpp"
#include "fhsc/ode_profile.hpp"
#include "fhsc/su2.hpp"

namespace fhsc {
namespace accept {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail_acc {

inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// --- deterministic random data ----------------------------------------------

// perturbed (optionally non-identity) integer-linear torus map with smooth
// low-mode trigonometric noise
inline DiscreteMap random_torus_map(const Mesh& mesh, Rng& rng, double amp,
                                    bool random_linear) {
  const int m = mesh.m;
  TargetKind t = m == 2 ? TargetKind::FlatTorus2 : TargetKind::FlatTorus4;
  std::vector<int> lin(size_t(m) * m, 0);
  for (int i = 0; i < m; ++i) lin[size_t(i) * m + i] = 1;
  if (random_linear)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) lin[size_t(i) * m + j] = int(rng.uniform_int(-1, 2));
  std::vector<double> a(size_t(m) * m), p(size_t(m) * m), a2(m), p2(m);
  for (auto& x : a) x = amp * rng.uniform(-1.0, 1.0);
  for (auto& x : p) x = rng.uniform(0.0, 2.0 * kPi);
  for (auto& x : a2) x = amp * rng.uniform(-1.0, 1.0);
  for (auto& x : p2) x = rng.uniform(0.0, 2.0 * kPi);
  return map_from_function(mesh, t, [&](const std::array<double, 4>& x, double* out) {
    for (int c = 0; c < m; ++c) {
      double s = 0.0;
      for (int d = 0; d < m; ++d) {
        s += lin[size_t(c) * m + d] * x[d];
        s += a[size_t(c) * m + d] * std::sin(2.0 * kPi * x[d] + p[size_t(c) * m + d]);
      }
      s += a2[c] * std::sin(2.0 * kPi * (x[0] + x[1]) + p2[c]);
      out[c] = s;
    }
  });
}

// smooth low-mode variation field (tangent-projected by the builder)
inline VariationField random_variation(const DiscreteMap& f, Rng& rng, double amp) {
  const int m = f.mesh->m, n = f.vdim;
  std::vector<double> c0(n), a(size_t(n) * m), p(size_t(n) * m);
  for (auto& x : c0) x = amp * rng.uniform(-1.0, 1.0);
  for (auto& x : a) x = amp * rng.uniform(-1.0, 1.0);
  for (auto& x : p) x = rng.uniform(0.0, 2.0 * kPi);
  return variation_from_function(
      f, [&, m, n](const std::array<double, 4>& x, const double*, double* out) {
        for (int c = 0; c < n; ++c) {
          double s = c0[c];
          for (int d = 0; d < m; ++d)
            s += a[size_t(c) * m + d] * std::sin(2.0 * kPi * x[d] + p[size_t(c) * m + d]);
          out[c] = s;
        }
      });
}

// --- criterion 1: block spectra of the second variation at the fibration ----
inline CriterionResult criterion_block_spectra() {
  double worst_dev = 0.0, min_ev = 1e300;
  for (int n = 0; n <= 20; ++n) {
    SpectrumReport rep = block_spectrum(hessian_block(n));
    worst_dev = std::max(worst_dev, rep.max_abs_deviation);
    min_ev = std::min(min_ev, rep.eigenvalues.front());
  }
  CriterionResult r{1, "hessian-block-spectra", false, ""};
  r.passed = worst_dev <= 1e-10 && min_ev >= -1e-12;
  r.detail = fmt("n <= 20: max deviation %.3g (tol 1e-10), min eigenvalue %.3g "
                 "(floor -1e-12)",
                 worst_dev, min_ev);
  return r;
}

// --- criterion 2: deformation family eigenvalues and threshold --------------
inline CriterionResult criterion_threshold() {
  double worst_dev = 0.0;
  for (int i = 0; i <= 12; ++i) {
    const double alpha = 0.25 * i;
    SpectrumReport rep = block_spectrum(ward_block(alpha));
    worst_dev = std::max(worst_dev, rep.max_abs_deviation);
  }
  const double alpha_star = stability_threshold(0.0, 2.0, 1e-6);
  CriterionResult r{2, "deformation-threshold", false, ""};
  r.passed = worst_dev <= 1e-12 && std::abs(alpha_star - 1.0) <= 1e-6;
  r.detail = fmt("13-point eigenvalue deviation %.3g (tol 1e-12), threshold "
                 "%.8f (target 1 +- 1e-6)",
                 worst_dev, alpha_star);
  return r;
}

// --- criterion 3: glued profile energy and integrator fidelity --------------
inline CriterionResult criterion_profile() {
  const double pi2 = kPi * kPi;
  const double glued = glued_energy(1e-6, 30.0, 100000);
  const double energy_err = std::abs(glued - pi2);
  // max error scales as C h^4 with C ~ 4e4 (the conserved-quantity drift is
  // amplified like 1/alpha^2 along the decaying tail), so h = 5e-4 lands the
  // trajectory at ~2.7e-9, safely inside the 1e-8 gate
  OdeTrajectory traj = integrate_el(1.0, -1.0, std::log(2.0), 10.0, 5e-4);
  double max_err = 0.0;
  for (size_t i = 0; i < traj.t.size(); ++i)
    max_err = std::max(max_err,
                       std::abs(traj.alpha[i] - exact_profile(traj.t[i]).alpha));
  CriterionResult r{3, "glued-profile-energy", false, ""};
  r.passed = energy_err <= 1e-3 && max_err <= 1e-8 && traj.h_drift <= 1e-10;
  r.detail = fmt("glued energy error %.3g (tol 1e-3), trajectory error %.3g "
                 "(tol 1e-8), H drift %.3g (tol 1e-10)",
                 energy_err, max_err, traj.h_drift);
  return r;
}

// --- criterion 4: reference energy values -----------------------------------
inline CriterionResult criterion_energies() {
  const double pi2 = kPi * kPi;
  Mesh t2 = Mesh::flat_torus(2, 32);
  const double e_id = energy(identity_torus_map(t2));
  Eigen::MatrixXi L(2, 2);
  L << 2, 0, 0, 1;
  const double e_lin = energy(linear_torus_map(t2, L));
  Mesh s3 = Mesh::su2_euler(48);
  const double e_hopf = energy(hopf_map(s3));
  Mesh pr = Mesh::sphere_product({64, 32, 64, 32});
  const double e_proj = energy(product_projection_map(pr));
  const double rel_hopf = std::abs(e_hopf - 8.0 * pi2) / (8.0 * pi2);
  const double rel_proj = std::abs(e_proj - 8.0 * pi2) / (8.0 * pi2);
  CriterionResult r{4, "reference-energies", false, ""};
  r.passed = std::abs(e_id - 0.5) <= 1e-13 && std::abs(e_lin - 2.0) <= 1e-13 &&
             rel_hopf <= 5e-3 && rel_proj <= 5e-3;
  r.detail = fmt("identity error %.3g, degree-2 error %.3g (tol 1e-13); ",
                 std::abs(e_id - 0.5), std::abs(e_lin - 2.0)) +
             fmt("fibration rel error %.3g, projection rel error %.3g (tol 5e-3)",
                 rel_hopf, rel_proj);
  return r;
}

// --- criterion 5: residual convergence under refinement ----------------------
inline CriterionResult criterion_residuals() {
  struct Case {
    std::string name;
    double coarse_norm, fine_norm, fine_threshold;
  };
  std::vector<Case> cases;
  {
    Mesh c = Mesh::flat_torus(2, 32), f = Mesh::flat_torus(2, 64);
    cases.push_back({"identity", el_residual(identity_torus_map(c)).residual_norm,
                     el_residual(identity_torus_map(f)).residual_norm,
                     criticality_threshold(f)});
    Eigen::MatrixXi L(2, 2);
    L << 2, 0, 0, 1;
    cases.push_back({"linear", el_residual(linear_torus_map(c, L)).residual_norm,
                     el_residual(linear_torus_map(f, L)).residual_norm,
                     criticality_threshold(f)});
  }
  {
    Mesh c = Mesh::su2_euler(24), f = Mesh::su2_euler(48);
    cases.push_back({"fibration", el_residual(hopf_map(c)).residual_norm,
                     el_residual(hopf_map(f)).residual_norm,
                     criticality_threshold(f)});
  }
  {
    Mesh c = Mesh::sphere_product({16, 8, 16, 8});
    Mesh f = Mesh::sphere_product({32, 16, 32, 16});
    cases.push_back({"projection", el_residual(product_projection_map(c)).residual_norm,
                     el_residual(product_projection_map(f)).residual_norm,
                     criticality_threshold(f)});
  }
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    bool exact = c.coarse_norm < 1e-12 && c.fine_norm < 1e-12;
    double order = exact ? std::numeric_limits<double>::infinity()
                         : observed_order(c.coarse_norm, c.fine_norm);
    bool good = (exact || order >= 1.9) && c.fine_norm <= c.fine_threshold;
    ok = ok && good;
    if (!detail.empty()) detail += "; ";
    detail += c.name + (exact ? std::string(" exact (< 1e-12)")
                              : fmt(" order %.2f, fine norm %.3g (cap %.3g)",
                                    order, c.fine_norm, c.fine_threshold));
  }
  CriterionResult r{5, "criticality-residuals", ok, detail};
  return r;
}

// --- criterion 6: conformal invariance of the 4d energy ----------------------
inline CriterionResult criterion_conformal(uint64_t seed) {
  Mesh t4 = Mesh::flat_torus(4, 6);
  Rng rng(derive_seed(seed, "conformal"));
  DiscreteMap f = random_torus_map(t4, rng, 0.1, false);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> lambda(t4.nv());
    for (double& x : lambda) x = std::exp(rng.uniform(-0.5, 0.5));
    ConformalCheck chk = conformal_invariance_check(f, lambda);
    worst = std::max(worst, chk.abs_gap / chk.base_energy);
  }
  CriterionResult r{6, "conformal-invariance", worst <= 1e-12, ""};
  r.detail = fmt("10 random conformal factors: max relative gap %.3g (tol 1e-12)",
                 worst);
  return r;
}

// --- criterion 7: topological lower bounds -----------------------------------
inline CriterionResult criterion_bounds(uint64_t seed) {
  Mesh t2 = Mesh::flat_torus(2, 16);
  Rng rng2(derive_seed(seed, "bounds2d"));
  double min_gap2 = 1e300;
  for (int i = 0; i < 100; ++i)
    min_gap2 = std::min(min_gap2, bound_2d(random_torus_map(t2, rng2, 0.3, true)).gap);
  Mesh t4 = Mesh::flat_torus(4, 6);
  Rng rng4(derive_seed(seed, "bounds4d"));
  double min_gap4 = 1e300;
  for (int i = 0; i < 50; ++i)
    min_gap4 = std::min(min_gap4, bound_4d(random_torus_map(t4, rng4, 0.2, true)).gap);
  double eq_gap = 0.0;
  const int mats[4][4] = {{1, 0, 0, 1}, {2, 0, 0, 1}, {1, 1, 0, 1}, {2, 1, 1, 1}};
  for (const auto& mm : mats) {
    Eigen::MatrixXi L(2, 2);
    L << mm[0], mm[1], mm[2], mm[3];
    eq_gap = std::max(eq_gap, std::abs(bound_2d(linear_torus_map(t2, L)).gap));
  }
  eq_gap = std::max(eq_gap, std::abs(bound_4d(identity_torus_map(t4)).gap));
  CriterionResult r{7, "topological-bounds", false, ""};
  r.passed = min_gap2 >= -1e-10 && min_gap4 >= -1e-10 && eq_gap <= 1e-10;
  r.detail = fmt("min gap 2d %.3g, 4d %.3g (floor -1e-10); equality-case gap "
                 "%.3g (tol 1e-10)",
                 min_gap2, min_gap4, eq_gap);
  return r;
}

// --- criterion 8: Laplacian spectra decompose by degree ----------------------
inline CriterionResult criterion_laplacian() {
  Mesh t2 = Mesh::flat_torus(2, 8);
  LaplacianSpectra a2 = laplacian_spectrum(t2, 2);
  LaplacianSpectra b2 = laplacian_spectrum(t2, 1);
  // dim 2: no 3-forms, so both the union identity and the refinement reduce
  // to spec(Laplacian on 2-forms) = spec(delta d on 1-forms)
  const double gap_t2 = match_value_sets(a2.laplacian, b2.delta_d, 1e-8).max_unmatched_gap;
  Mesh t4 = Mesh::flat_torus(4, 4);
  LaplacianSpectra a4 = laplacian_spectrum(t4, 2);
  LaplacianSpectra b4 = laplacian_spectrum(t4, 1);
  LaplacianSpectra c4 = laplacian_spectrum(t4, 3);
  std::vector<double> uni = b4.delta_d;
  uni.insert(uni.end(), c4.d_delta.begin(), c4.d_delta.end());
  const double gap_union = match_value_sets(a4.laplacian, uni, 1e-8).max_unmatched_gap;
  const double gap_refine = match_value_sets(a4.laplacian, b4.delta_d, 1e-8).max_unmatched_gap;
  CriterionResult r{8, "laplacian-spectra", false, ""};
  r.passed = gap_t2 <= 1e-9 && gap_union <= 1e-9 && gap_refine <= 1e-9;
  r.detail = fmt("2-torus gap %.3g; 4-torus union gap %.3g, refinement gap %.3g "
                 "(tol 1e-9)",
                 gap_t2, gap_union, gap_refine);
  return r;
}

// --- criterion 9: first/second variation consistency -------------------------
inline CriterionResult criterion_variations(uint64_t seed) {
  // 64^2: the finite-difference/formula comparison carries an O(h^4)
  // product-rule defect of the stencil, ~6e-5 absolute at 32^2 on the worst
  // draw; one refinement brings the worst relative gap to ~2e-4
  Mesh t2 = Mesh::flat_torus(2, 64);
  double worst_fv = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng(derive_seed(seed, "fv" + std::to_string(i)));
    DiscreteMap f = random_torus_map(t2, rng, 0.1, false);
    VariationField x = random_variation(f, rng, 0.15);
    FirstVariation fv = first_variation_check(f, x, 1e-4);
    const double den =
        std::max({std::abs(fv.fd_derivative), std::abs(fv.formula_value), 1e-6});
    worst_fv = std::max(worst_fv, fv.abs_gap / den);
  }
  DiscreteMap id = identity_torus_map(t2);
  const double e0 = energy(id);
  double worst_h = 0.0;
  for (int i = 0; i < 10; ++i) {
    Rng rng(derive_seed(seed, "hess" + std::to_string(i)));
    VariationField y = random_variation(id, rng, 0.2);
    HessianValue h = hessian_quadratic(id, y);
    const double eps = 1e-3;
    const double fd2 = (energy(deformed(id, y, eps)) - 2.0 * e0 +
                        energy(deformed(id, y, -eps))) / (eps * eps);
    worst_h = std::max(worst_h,
                       std::abs(h.total - fd2) / std::max(std::abs(fd2), 1e-6));
  }
  double worst_k = 0.0;
  for (int i = 0; i < 10; ++i) {
    Rng rng(derive_seed(seed, "symp" + std::to_string(i)));
    std::vector<double> stream(t2.nv());
    double a0 = 0.3 * rng.uniform(-1.0, 1.0), p0 = rng.uniform(0.0, 2.0 * kPi);
    double a1 = 0.3 * rng.uniform(-1.0, 1.0), p1 = rng.uniform(0.0, 2.0 * kPi);
    double a2 = 0.3 * rng.uniform(-1.0, 1.0), p2 = rng.uniform(0.0, 2.0 * kPi);
    for (int v = 0; v < t2.nv(); ++v) {
      const auto x = t2.coords(v);
      stream[v] = a0 * std::sin(2.0 * kPi * x[0] + p0) +
                  a1 * std::sin(2.0 * kPi * x[1] + p1) +
                  a2 * std::sin(2.0 * kPi * (x[0] + x[1]) + p2);
    }
    VariationField y(id);
    for (int v = 0; v < t2.nv(); ++v) {
      y.at(0, v, t2.nv()) = stencil_diff(t2, stream.data(), v, 1);
      y.at(1, v, t2.nv()) = -stencil_diff(t2, stream.data(), v, 0);
    }
    worst_k = std::max(worst_k, std::abs(hessian_quadratic(id, y).total));
  }
  CriterionResult r{9, "variation-consistency", false, ""};
  r.passed = worst_fv <= 1e-3 && worst_h <= 1e-3 && worst_k <= 1e-10;
  r.detail = fmt("first variation rel %.3g, Hessian-vs-FD rel %.3g (tol 1e-3); "
                 "symplectic kernel %.3g (tol 1e-10)",
                 worst_fv, worst_h, worst_k);
  return r;
}

// --- criterion 10: matrix-element Rayleigh quotients --------------------------
inline CriterionResult criterion_matrix_elements() {
  Mesh s3 = Mesh::su2_euler(48);
  const int cases[3][3] = {{1, 0, 0}, {2, 1, 0}, {3, 0, 2}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    PeterWeylResult pw = peter_weyl_check(s3, c[0], c[1], c[2]);
    const bool good = pw.predicted > 0.0
                          ? pw.abs_error <= 0.01 * pw.predicted
                          : pw.abs_error <= 1e-2;
    ok = ok && good;
    if (!detail.empty()) detail += "; ";
    detail += fmt("(n=%g,k=%g) err %.3g", double(c[0]), double(c[1]), pw.abs_error);
  }
  CriterionResult r{10, "matrix-element-rayleigh", ok,
                    detail + " (tol 1% relative, 1e-2 at zero)"};
  return r;
}

}  // namespace detail_acc

inline std::vector<CriterionResult> run_acceptance(
    uint64_t seed,
    const std::function<void(const CriterionResult&)>& progress = {}) {
  using Fn = std::function<CriterionResult()>;
  struct Entry {
    const char* name;
    Fn fn;
  };
  const Entry entries[] = {
      {"hessian-block-spectra", [] { return detail_acc::criterion_block_spectra(); }},
      {"deformation-threshold", [] { return detail_acc::criterion_threshold(); }},
      {"glued-profile-energy", [] { return detail_acc::criterion_profile(); }},
      {"reference-energies", [] { return detail_acc::criterion_energies(); }},
      {"criticality-residuals", [] { return detail_acc::criterion_residuals(); }},
      {"conformal-invariance", [seed] { return detail_acc::criterion_conformal(seed); }},
      {"topological-bounds", [seed] { return detail_acc::criterion_bounds(seed); }},
      {"laplacian-spectra", [] { return detail_acc::criterion_laplacian(); }},
      {"variation-consistency", [seed] { return detail_acc::criterion_variations(seed); }},
      {"matrix-element-rayleigh", [] { return detail_acc::criterion_matrix_elements(); }},
  };
  std::vector<CriterionResult> out;
  int index = 1;
  for (const Entry& e : entries) {
    CriterionResult r;
    try {
      r = e.fn();
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.index = index++;
    r.name = e.name;
    if (progress) progress(r);
    out.push_back(std::move(r));
  }
  return out;
}

inline bool all_passed(const std::vector<CriterionResult>& rs) {
  for (const auto& r : rs)
    if (!r.passed) return false;
  return true;
}

}  // namespace accept
}  // namespace fhsc
