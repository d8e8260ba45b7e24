#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "fhsc/dec.hpp"
#include "fhsc/mesh.hpp"
#include "fhsc/num.hpp"
#include "fhsc/su2.hpp"

using fhsc::Cochain;
using fhsc::kPi;
using fhsc::Mesh;

namespace {

Cochain random_cochain(const Mesh& mesh, int p, fhsc::Rng& rng) {
  Cochain c(mesh, p);
  for (double& x : c.values) x = rng.uniform(-1.0, 1.0);
  return c;
}

double min_spacing(const Mesh& mesh) {
  double h = 1e300;
  for (int d = 0; d < mesh.m; ++d) h = std::min(h, mesh.spacing(d));
  return h;
}

}  // namespace

TEST_CASE("mesh constructors validate their arguments") {
  CHECK_THROWS_AS(Mesh::flat_torus(1, 8), std::invalid_argument);
  CHECK_THROWS_AS(Mesh::flat_torus(5, 8), std::invalid_argument);
  CHECK_THROWS_AS(Mesh::flat_torus(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(Mesh::flat_torus(2, {8, 8, 8, 8}, {1.0, -1.0, 1.0, 1.0}),
                  std::invalid_argument);
  // polar axes must be divisible by four so cell masses avoid sin zeros
  CHECK_THROWS_AS(Mesh::su2_euler({8, 6, 8}), std::invalid_argument);
  CHECK_THROWS_AS(Mesh::sphere_product({8, 6, 8, 4}), std::invalid_argument);
  CHECK_THROWS_AS(Mesh::sphere_product({8, 4, 8, 6}), std::invalid_argument);
  CHECK_NOTHROW(Mesh::su2_euler({8, 4, 8}));
}

TEST_CASE("mesh attachments validate their arguments") {
  Mesh t2 = Mesh::flat_torus(2, 8);
  CHECK_THROWS_AS(t2.attach_conformal(std::vector<double>(3, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(t2.attach_conformal(std::vector<double>(t2.nv(), 0.0)),
                  std::invalid_argument);
  Mesh su2 = Mesh::su2_euler(8);
  CHECK_THROWS_AS(su2.attach_metric_override(
                      [](const std::array<double, 4>&) {
                        return fhsc::MatD::Identity(3, 3);
                      }),
                  std::invalid_argument);
  CHECK_THROWS_AS(t2.attach_metric_override(
                      [](const std::array<double, 4>&) {
                        fhsc::MatD g = fhsc::MatD::Identity(2, 2);
                        g(0, 0) = -1.0;
                        return g;
                      }),
                  std::invalid_argument);
  CHECK_THROWS_AS(t2.frame(0), std::invalid_argument);
  CHECK_THROWS_AS(t2.quaternion(0), std::invalid_argument);
}

TEST_CASE("group mesh geometry: periods, covering, offsets, metric, frame") {
  Mesh su2 = Mesh::su2_euler(12);
  for (int d = 0; d < 3; ++d) CHECK(su2.period(d) == Catch::Approx(4 * kPi));
  CHECK(su2.covering() == 8.0);
  CHECK(su2.polar_axis(1));
  CHECK_FALSE(su2.polar_axis(0));
  double h = su2.spacing(1);
  CHECK(su2.coord(0, 1) == Catch::Approx(0.5 * h));

  fhsc::Rng rng(fhsc::derive_seed(0x5eed, "su2-mesh"));
  for (int trial = 0; trial < 12; ++trial) {
    int v = rng.uniform_int(0, su2.nv() - 1);
    double b = su2.coord(v, 1);
    fhsc::MatD g = su2.metric(v);
    CHECK(g(0, 0) == 1.0);
    CHECK(g(1, 1) == 1.0);
    CHECK(g(2, 2) == 1.0);
    CHECK(g(0, 2) == Catch::Approx(std::cos(b)).margin(1e-14));
    CHECK(g(0, 1) == 0.0);
    CHECK(std::abs(su2.signed_density(v) - std::sin(b)) <= 1e-14);
    // the distinguished frame is orthonormal: E g E^T = Id
    Eigen::Matrix3d E = su2.frame(v);
    Eigen::Matrix3d gram = E * g * E.transpose();
    CHECK((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
    // quaternion of the vertex is a unit quaternion giving a group element
    fhsc::Quat q = su2.quaternion(v);
    CHECK(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z ==
          Catch::Approx(1.0).margin(1e-13));
    CHECK(fhsc::is_special_unitary(fhsc::su2_matrix(q)));
  }
}

TEST_CASE("sphere product geometry") {
  Mesh sp = Mesh::sphere_product({8, 4, 8, 4});
  for (int d = 0; d < 4; ++d) CHECK(sp.period(d) == Catch::Approx(2 * kPi));
  CHECK(sp.covering() == 4.0);
  CHECK(sp.polar_axis(1));
  CHECK(sp.polar_axis(3));
  fhsc::Rng rng(fhsc::derive_seed(0x5eed, "sp-mesh"));
  for (int trial = 0; trial < 8; ++trial) {
    int v = rng.uniform_int(0, sp.nv() - 1);
    double t1 = sp.coord(v, 1), t2 = sp.coord(v, 3);
    fhsc::MatD g = sp.metric(v);
    CHECK(g(0, 0) == Catch::Approx(std::sin(t1) * std::sin(t1)).margin(1e-14));
    CHECK(g(1, 1) == 1.0);
    CHECK(g(2, 2) == Catch::Approx(std::sin(t2) * std::sin(t2)).margin(1e-14));
    CHECK(g(3, 3) == 1.0);
    CHECK(std::abs(sp.signed_density(v) - std::sin(t1) * std::sin(t2)) <= 1e-14);
  }
}

TEST_CASE("discrete volumes are exact for all mesh families") {
  CHECK(Mesh::flat_torus(2, 16).volume() == Catch::Approx(1.0).epsilon(1e-13));
  CHECK(Mesh::flat_torus(4, 6).volume() == Catch::Approx(1.0).epsilon(1e-13));
  // polar cell masses integrate |sin| exactly, so these are not approximations
  CHECK(Mesh::su2_euler(12).volume() ==
        Catch::Approx(16.0 * kPi * kPi).epsilon(1e-13));
  CHECK(Mesh::su2_euler({16, 8, 12}).volume() ==
        Catch::Approx(16.0 * kPi * kPi).epsilon(1e-13));
  CHECK(Mesh::sphere_product({8, 4, 8, 4}).volume() ==
        Catch::Approx(16.0 * kPi * kPi).epsilon(1e-13));
  CHECK(Mesh::sphere_product({12, 8, 6, 4}).volume() ==
        Catch::Approx(16.0 * kPi * kPi).epsilon(1e-13));
  for (const Mesh& mesh : {Mesh::su2_euler(8), Mesh::sphere_product({4, 4, 4, 4})})
    for (int v = 0; v < mesh.nv(); ++v) CHECK(mesh.vol(v) > 0.0);
}

TEST_CASE("derivative stencil matches its Fourier symbol") {
  Mesh t2 = Mesh::flat_torus(2, 16);
  const double h = t2.spacing(0);
  const int k = 3;
  std::vector<double> f(t2.nv());
  for (int v = 0; v < t2.nv(); ++v) f[v] = std::sin(2 * kPi * k * t2.coord(v, 0));
  const double sigma = fhsc::stencil_symbol(2 * kPi * k * h, h);
  CHECK(sigma == Catch::Approx((8 * std::sin(2 * kPi * k * h) -
                                std::sin(4 * kPi * k * h)) /
                               (6 * h))
                     .epsilon(1e-14));
  for (int v = 0; v < t2.nv(); ++v) {
    double want = sigma * std::cos(2 * kPi * k * t2.coord(v, 0));
    CHECK(std::abs(fhsc::stencil_diff(t2, f.data(), v, 0) - want) <=
          1e-12 * (1 + std::abs(sigma)));
  }
  // fourth-order accuracy: symbol approaches the wave number as h^4
  double th = 0.3;
  double err1 = std::abs(fhsc::stencil_symbol(th, 1.0) - th);
  double err2 = std::abs(fhsc::stencil_symbol(th / 2, 0.5) - th);
  CHECK(err1 / err2 > 14.0);
  CHECK(err1 / err2 < 18.0);
}

TEST_CASE("exterior derivative squares to zero") {
  fhsc::Rng rng(fhsc::derive_seed(0x5eed, "ddzero"));
  struct Case {
    Mesh mesh;
    int p;
  };
  std::vector<Case> cases;
  cases.push_back({Mesh::flat_torus(2, 16), 0});
  cases.push_back({Mesh::flat_torus(3, 8), 0});
  cases.push_back({Mesh::flat_torus(4, 6), 0});
  cases.push_back({Mesh::flat_torus(4, 6), 1});
  cases.push_back({Mesh::flat_torus(4, 6), 2});
  cases.push_back({Mesh::su2_euler(12), 0});
  cases.push_back({Mesh::su2_euler(12), 1});
  cases.push_back({Mesh::sphere_product({8, 4, 8, 4}), 0});
  cases.push_back({Mesh::sphere_product({8, 4, 8, 4}), 1});
  cases.push_back({Mesh::sphere_product({8, 4, 8, 4}), 2});
  for (auto& cs : cases) {
    Cochain a = random_cochain(cs.mesh, cs.p, rng);
    Cochain da = fhsc::exterior_d(a);
    Cochain dda = fhsc::exterior_d(da);
    double tol = 1e-13 * (1.0 + fhsc::max_abs(da)) / min_spacing(cs.mesh);
    INFO("m = " << cs.mesh.m << " p = " << cs.p << " dd = " << fhsc::max_abs(dda)
                << " tol = " << tol);
    CHECK(fhsc::max_abs(dda) <= tol);
  }
}

TEST_CASE("degree guards on the operators") {
  Mesh t2 = Mesh::flat_torus(2, 8);
  Cochain top(t2, 2), zero(t2, 0);
  CHECK_THROWS_AS(fhsc::exterior_d(top), std::domain_error);
  CHECK_THROWS_AS(fhsc::codifferential(zero), std::domain_error);
  CHECK_THROWS_AS(fhsc::sharp(zero), std::invalid_argument);
  CHECK_THROWS_AS(Cochain(t2, 3), std::invalid_argument);
  CHECK_THROWS_AS(Cochain(t2, -1), std::invalid_argument);
  Cochain a(t2, 1), b(t2, 0);
  CHECK_THROWS_AS(fhsc::l2_inner(a, b), std::invalid_argument);
  CHECK_THROWS_AS(fhsc::axpy(1.0, a, b), std::invalid_argument);
}

TEST_CASE("hodge star on the flat square torus") {
  Mesh t2 = Mesh::flat_torus(2, 8);
  Cochain dx(t2, 1), dy(t2, 1);
  for (int v = 0; v < t2.nv(); ++v) {
    dx.at(0, v) = 1.0;
    dy.at(1, v) = 1.0;
  }
  Cochain sdx = fhsc::hodge_star(dx);
  Cochain sdy = fhsc::hodge_star(dy);
  for (int v = 0; v < t2.nv(); ++v) {
    CHECK(sdx.at(0, v) == 0.0);
    CHECK(sdx.at(1, v) == 1.0);   // star dx = dy
    CHECK(sdy.at(0, v) == -1.0);  // star dy = -dx
    CHECK(sdy.at(1, v) == 0.0);
  }
  Mesh t4 = Mesh::flat_torus(4, 4);
  Cochain e01(t4, 2);
  int c01 = fhsc::position_of_index(4, 2, {0, 1, 0, 0});
  int c23 = fhsc::position_of_index(4, 2, {2, 3, 0, 0});
  for (int v = 0; v < t4.nv(); ++v) e01.at(c01, v) = 1.0;
  Cochain s01 = fhsc::hodge_star(e01);
  for (int v = 0; v < t4.nv(); ++v) {
    CHECK(s01.at(c23, v) == 1.0);  // star (dx0^dx1) = dx2^dx3
    CHECK(s01.at(c01, v) == 0.0);
  }
}

TEST_CASE("star composed with itself obeys the degree sign law") {
  fhsc::Rng rng(fhsc::derive_seed(0x5eed, "starstar"));
  struct Case {
    Mesh mesh;
    int p;
    double tol;  // zero means exact
  };
  std::vector<Case> cases;
  cases.push_back({Mesh::flat_torus(2, 8), 1, 0.0});
  cases.push_back({Mesh::flat_torus(4, 4), 2, 0.0});
  cases.push_back({Mesh::flat_torus(4, 4), 1, 0.0});
  cases.push_back({Mesh::su2_euler(8), 0, 1e-12});
  cases.push_back({Mesh::su2_euler(8), 1, 1e-12});
  cases.push_back({Mesh::su2_euler(8), 2, 1e-12});
  cases.push_back({Mesh::sphere_product({8, 4, 8, 4}), 1, 1e-12});
  cases.push_back({Mesh::sphere_product({8, 4, 8, 4}), 2, 1e-12});
  for (auto& cs : cases) {
    const int sign =
        (cs.p * (cs.mesh.m - cs.p)) % 2 == 0 ? 1 : -1;
    Cochain a = random_cochain(cs.mesh, cs.p, rng);
    Cochain ssa = fhsc::hodge_star(fhsc::hodge_star(a));
    double worst = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i)
      worst = std::max(worst, std::abs(ssa.values[i] - sign * a.values[i]));
    INFO("m = " << cs.mesh.m << " p = " << cs.p << " worst " << worst);
    if (cs.tol == 0.0)
      CHECK(worst == 0.0);
    else
      CHECK(worst <= cs.tol * (1 + fhsc::max_abs(a)));
  }
}

TEST_CASE("constant form norms reproduce the volume") {
  Mesh t2 = Mesh::flat_torus(2, 12);
  Cochain dx(t2, 1);
  for (int v = 0; v < t2.nv(); ++v) dx.at(0, v) = 1.0;
  CHECK(fhsc::l2_inner(dx, dx) == Catch::Approx(1.0).epsilon(1e-13));

  Mesh t4 = Mesh::flat_torus(4, 4);
  Cochain omega(t4, 2);
  int c01 = fhsc::position_of_index(4, 2, {0, 1, 0, 0});
  int c23 = fhsc::position_of_index(4, 2, {2, 3, 0, 0});
  for (int v = 0; v < t4.nv(); ++v) {
    omega.at(c01, v) = 1.0;
    omega.at(c23, v) = 1.0;
  }
  CHECK(fhsc::l2_inner(omega, omega) == Catch::Approx(2.0).epsilon(1e-13));

  // unit-norm volume forms on the curved meshes
  Mesh su2 = Mesh::su2_euler(12);
  Cochain one(su2, 0);
  for (int v = 0; v < su2.nv(); ++v) one.at(0, v) = 1.0;
  Cochain vol3 = fhsc::hodge_star(one);
  CHECK(fhsc::l2_inner(one, one) == Catch::Approx(su2.volume()).epsilon(1e-12));
  CHECK(fhsc::l2_inner(vol3, vol3) == Catch::Approx(su2.volume()).epsilon(1e-12));
}

TEST_CASE("inner product obeys the cauchy-schwarz inequality") {
  fhsc::Rng rng(fhsc::derive_seed(0x5eed, "cs"));
  Mesh su2 = Mesh::su2_euler(8);
  Mesh t2 = Mesh::flat_torus(2, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const Mesh& mesh = (trial % 2 == 0) ? su2 : t2;
    int p = trial % (mesh.m + 1);
    Cochain a = random_cochain(mesh, p, rng);
    Cochain b = random_cochain(mesh, p, rng);
    double lhs = std::abs(fhsc::l2_inner(a, b));
    double rhs = fhsc::l2_norm(a) * fhsc::l2_norm(b);
    INFO("trial " << trial << " p = " << p);
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("adjointness of derivative and codifferential on flat meshes") {
  fhsc::Rng rng(fhsc::derive_seed(0x5eed, "adj-flat"));
  for (int p : {0, 1, 2}) {
    Mesh t4 = Mesh::flat_torus(4, 6);
    Cochain a = random_cochain(t4, p, rng);
    Cochain b = random_cochain(t4, p + 1, rng);
    double lhs = fhsc::l2_inner(fhsc::exterior_d(a), b);
    double rhs = fhsc::l2_inner(a, fhsc::codifferential(b));
    double scale = fhsc::l2_norm(fhsc::exterior_d(a)) * fhsc::l2_norm(b) + 1e-30;
    INFO("p = " << p << " lhs " << lhs << " rhs " << rhs);
    CHECK(std::abs(lhs - rhs) <= 1e-11 * scale);
  }
}

TEST_CASE("adjointness defect on curved meshes is small and reported") {
  // the star-based codifferential commutes the stencil past metric factors,
  // so the defect is O(h^4); it is measured here rather than assumed exact
  fhsc::Rng rng(fhsc::derive_seed(0x5eed, "adj-curved"));
  Mesh su2 = Mesh::su2_euler(16);
  for (int p : {0, 1}) {
    // smooth data: trigonometric in each axis so derivatives stay O(1)
    Cochain a(su2, p);
    Cochain b(su2, p + 1);
    for (int c = 0; c < a.ncomp; ++c)
      for (int v = 0; v < su2.nv(); ++v)
        a.at(c, v) = std::sin(0.5 * su2.coord(v, 0) + c) *
                     std::cos(0.5 * su2.coord(v, 1)) +
                     std::sin(0.5 * su2.coord(v, 2));
    for (int c = 0; c < b.ncomp; ++c)
      for (int v = 0; v < su2.nv(); ++v)
        b.at(c, v) = std::cos(0.5 * su2.coord(v, 0)) +
                     std::sin(0.5 * su2.coord(v, 1) + c) *
                     std::sin(0.5 * su2.coord(v, 2));
    double lhs = fhsc::l2_inner(fhsc::exterior_d(a), b);
    double rhs = fhsc::l2_inner(a, fhsc::codifferential(b));
    double scale = fhsc::l2_norm(fhsc::exterior_d(a)) * fhsc::l2_norm(b) + 1e-30;
    double defect = std::abs(lhs - rhs) / scale;
    INFO("p = " << p << " relative adjointness defect " << defect);
    CHECK(defect < 0.05);
  }
}

TEST_CASE("musical isomorphisms round-trip") {
  fhsc::Rng rng(fhsc::derive_seed(0x5eed, "musical"));
  for (const Mesh& mesh :
       {Mesh::flat_torus(2, 8), Mesh::su2_euler(8),
        Mesh::sphere_product({8, 4, 8, 4})}) {
    Cochain a = random_cochain(mesh, 1, rng);
    Cochain back = fhsc::flat(fhsc::sharp(a));
    double worst = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i)
      worst = std::max(worst, std::abs(back.values[i] - a.values[i]));
    CHECK(worst <= 1e-12 * (1 + fhsc::max_abs(a)));
  }
}

TEST_CASE("metric override feeds the musical isomorphisms") {
  Mesh t2 = Mesh::flat_torus(2, 8);
  t2.attach_metric_override([](const std::array<double, 4>&) {
    fhsc::MatD g = fhsc::MatD::Zero(2, 2);
    g(0, 0) = 4.0;
    g(1, 1) = 1.0;
    return g;
  });
  Cochain dx(t2, 1);
  for (int v = 0; v < t2.nv(); ++v) dx.at(0, v) = 1.0;
  fhsc::VectorField x = fhsc::sharp(dx);
  for (int v = 0; v < t2.nv(); ++v) {
    CHECK(x.at(0, v) == Catch::Approx(0.25).margin(1e-14));
    CHECK(x.at(1, v) == 0.0);
  }
  // norm of dx shrinks accordingly: <dx,dx> = g^{00} * area-weight
  // area weight per vertex cell is sqrt(det g) h^2 = 2 h^2, total 2
  CHECK(fhsc::l2_inner(dx, dx) == Catch::Approx(0.25 * 2.0).epsilon(1e-12));
}

TEST_CASE("conformal factor scales the musical isomorphisms") {
  Mesh t2 = Mesh::flat_torus(2, 8);
  std::vector<double> lam(t2.nv(), 2.0);
  t2.attach_conformal(lam);
  Cochain dx(t2, 1);
  for (int v = 0; v < t2.nv(); ++v) dx.at(0, v) = 1.0;
  fhsc::VectorField x = fhsc::sharp(dx);
  for (int v = 0; v < t2.nv(); ++v)
    CHECK(x.at(0, v) == Catch::Approx(0.25).margin(1e-14));
  // in two dimensions <dx,dx> is conformally invariant: lambda^-2 * lambda^2
  CHECK(fhsc::l2_inner(dx, dx) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("star on middle-degree forms in four dimensions is conformally invariant") {
  fhsc::Rng rng(fhsc::derive_seed(0x5eed, "conf-star"));
  Mesh plain = Mesh::sphere_product({8, 4, 8, 4});
  Mesh scaled = Mesh::sphere_product({8, 4, 8, 4});
  std::vector<double> lam(scaled.nv());
  for (double& l : lam) l = std::exp(rng.uniform(-0.5, 0.5));
  scaled.attach_conformal(lam);
  Cochain a = random_cochain(plain, 2, rng);
  Cochain b(scaled, 2);
  b.values = a.values;
  Cochain sa = fhsc::hodge_star(a);
  Cochain sb = fhsc::hodge_star(b);
  double worst = 0.0;
  for (size_t i = 0; i < sa.values.size(); ++i)
    worst = std::max(worst, std::abs(sa.values[i] - sb.values[i]));
  CHECK(worst <= 1e-12 * (1 + fhsc::max_abs(sa)));
}
