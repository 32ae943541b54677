#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "relcont/calculus.hpp"
#include "relcont/em.hpp"
#include "relcont/junction.hpp"
#include "relcont/spacetimes.hpp"

using namespace relcont;

namespace {

constexpr double ratio_lo = 3.0;
constexpr double ratio_hi = 5.0;

double value_norm(const TensorValue& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

void check_ratio(double coarse, double fine, double floor_v) {
  CHECK(coarse > floor_v);
  CHECK(coarse / fine > ratio_lo);
  CHECK(coarse / fine < ratio_hi);
}

void check_reports_close(const JumpReport& a, const JumpReport& b, double tol) {
  REQUIRE(a.entries.size() == b.entries.size());
  for (const JumpEntry& e : a.entries) {
    const JumpEntry& o = b.entry(e.name);
    CHECK(std::fabs(e.linf - o.linf) <= tol * (1.0 + e.linf));
    CHECK(std::fabs(e.l2 - o.l2) <= tol * (1.0 + e.l2));
  }
}

TensorField constant_vector(const ChartGrid& grid, std::size_t comp, double v) {
  TensorField f(grid, {Slot::Up});
  for (std::size_t p = 0; p < grid.num_points(); ++p) f.point_data(p)[comp] = v;
  return f;
}

TensorField constant_scalar(const ChartGrid& grid, double v) {
  TensorField f(grid, {});
  for (std::size_t p = 0; p < grid.num_points(); ++p) f.point_data(p)[0] = v;
  return f;
}

// smooth quadratic-in-coordinates metric; second-order stencils are exact on
// it, so matched two-sided evaluations cancel to rounding
TensorValue bent_metric(const std::vector<double>& x) {
  TensorValue g(4, {Slot::Down, Slot::Down});
  g(0, 0) = -1.0 - 0.12 * x[1] * x[1];
  g(1, 1) = 1.0 + 0.1 * x[2] * x[2];
  g(2, 2) = 1.0 + 0.08 * x[3] * x[3];
  g(3, 3) = 1.0 + 0.06 * x[1] * x[1];
  g(1, 2) = g(2, 1) = 0.06 * x[1] * x[3];
  g(0, 2) = g(2, 0) = 0.04 * x[2] * x[3];
  return g;
}

TensorValue bent_potential(const std::vector<double>& x) {
  TensorValue a(4, {Slot::Down});
  a(0) = 0.25 * x[1] * x[1] + 0.1 * x[2] * x[3];
  a(1) = 0.12 * x[3] * x[3];
  a(2) = 0.15 * x[2] * x[3];
  return a;
}

ChartGrid interior_box(std::vector<std::size_t> shape) {
  return make_grid({0.0, -0.62, -0.5, 0.0}, {0.48, 0.18, 0.5, 0.48}, std::move(shape));
}

ChartGrid exterior_box(std::vector<std::size_t> shape) {
  return make_grid({0.0, -0.18, -0.5, 0.0}, {0.48, 0.62, 0.5, 0.48}, std::move(shape));
}

Interface planar_interface(const std::string& phi = "x1") {
  return sample_interface(parse_expression(phi), {0.06, -0.37, -0.44, 0.06},
                          {0.42, 0.43, 0.44, 0.42}, {4, 5, 9, 4});
}

// matched solution: the same analytic metric and potential on both grids
TwoSidedSolution matched_solution(const ChartGrid& gi, const ChartGrid& ge) {
  TwoSidedSolution sol;
  sol.iface = planar_interface();
  sol.g_minus = build_metric_field(gi, bent_metric);
  sol.g_plus = build_metric_field(ge, bent_metric);
  sol.a_minus = sample_field(gi, {Slot::Down}, bent_potential);
  sol.a_plus = sample_field(ge, {Slot::Down}, bent_potential);
  sol.u = normalize_velocity_field(constant_vector(gi, 0, 1.0), sol.g_minus, 1.0);
  sol.rho = constant_scalar(gi, 1.1);
  sol.s = constant_scalar(gi, 0.7);
  sol.model = maxwell_model();
  sol.c = 1.0;
  return sol;
}

// electrostatic refraction across x1 = 0: harmonic potentials with continuous
// tangential E and normal D, interior pressure profile chosen so the total
// traction balances
struct DielectricParams {
  double chi_e = 0.5;
  double kw = 1.1;
  double amp = 0.4;
  double tangential_break = 0.0;
};

// the surface sits on a grid plane of both sides and the samples on shared
// nodes, so the jump error is the plain central-difference truncation; the
// two grids use different spacings to keep it from cancelling across sides
ChartGrid dielectric_interior(const std::vector<std::size_t>& shape) {
  return make_grid({0.0, -0.64, -0.5, 0.0}, {0.48, 0.16, 0.5, 0.48}, shape);
}

ChartGrid dielectric_exterior(const std::vector<std::size_t>& shape) {
  return make_grid({0.0, -0.24, -0.6, 0.0}, {0.48, 0.96, 0.6, 0.48}, shape);
}

TwoSidedSolution dielectric_solution(const ChartGrid& gi, const ChartGrid& ge,
                                     const DielectricParams& par,
                                     const std::string& phi = "x1") {
  double er = 1.0 + par.chi_e;
  double qc = 0.5 * par.amp * (1.0 + er);
  double rc = 0.5 * par.amp * (1.0 - er);
  double kw = par.kw;
  TwoSidedSolution sol;
  sol.iface = sample_interface(parse_expression(phi), {0.06, -0.37, -0.3, 0.06},
                               {0.42, 0.43, 0.3, 0.42}, {4, 5, 3, 4});
  sol.g_minus = minkowski_field(gi);
  sol.g_plus = minkowski_field(ge);
  sol.a_minus = sample_field(gi, {Slot::Down}, [&](const std::vector<double>& x) {
    TensorValue a(4, {Slot::Down});
    a(0) = par.amp * std::exp(kw * x[1]) * std::sin(kw * x[2]);
    return a;
  });
  sol.a_plus = sample_field(ge, {Slot::Down}, [&](const std::vector<double>& x) {
    TensorValue a(4, {Slot::Down});
    a(0) = (qc * std::exp(kw * x[1]) + rc * std::exp(-kw * x[1])) * std::sin(kw * x[2]) +
           par.tangential_break * x[2];
    return a;
  });
  sol.u = constant_vector(gi, 0, 1.0);
  sol.rho = sample_scalar(gi, [&](const std::vector<double>& x) {
    double et = par.amp * kw * std::exp(kw * x[1]) * std::cos(kw * x[2]);
    double en = par.amp * kw * std::exp(kw * x[1]) * std::sin(kw * x[2]);
    double pm = 0.5 * (1.0 - er) * (et * et + er * en * en);
    return std::sqrt(2.0 + pm);
  });
  sol.s = sample_scalar(gi, [](const std::vector<double>&) { return std::sqrt(2.0); });
  sol.model = linear_model(parse_expression("rho^2 - s^2"), par.chi_e, 0.0);
  sol.c = 1.0;
  return sol;
}

}  // namespace

TEST_CASE("interface sampling lands on the level set") {
  Expression cyl = parse_expression("x1^2 + x2^2 - 0.64");
  Interface iface = sample_interface(cyl, {0.0, -1.2, -1.2, 0.0}, {0.4, 1.2, 1.2, 0.4},
                                     {3, 13, 13, 3});
  CHECK(iface.samples.size() > 100);
  for (const std::vector<double>& x : iface.samples) {
    double phi = x[1] * x[1] + x[2] * x[2] - 0.64;
    CHECK(std::fabs(phi) < 1e-10);
  }

  // lattice nodes sitting exactly on the surface become samples once
  Interface plane = sample_interface(parse_expression("x1"), {0.0, -0.5, -0.5, 0.0},
                                     {0.4, 0.5, 0.5, 0.4}, {3, 5, 5, 3});
  CHECK(plane.samples.size() == 45);
  for (const std::vector<double>& x : plane.samples) CHECK(std::fabs(x[1]) < 1e-12);

  CHECK_THROWS_AS(sample_interface(parse_expression("x1 - 9"), {0.0, -0.5, -0.5, 0.0},
                                   {0.4, 0.5, 0.5, 0.4}, {3, 5, 5, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_interface(parse_expression("x9 + x1"), {0.0, -0.5, -0.5, 0.0},
                                   {0.4, 0.5, 0.5, 0.4}, {3, 5, 5, 3}),
                  ExprError);
}

TEST_CASE("planar interface in minkowski is flat") {
  ChartGrid grid = make_grid({0.0, -0.5, -0.5, -0.5}, {0.4, 0.5, 0.5, 0.5}, {5, 9, 7, 7});
  MetricField m = minkowski_field(grid);
  Interface iface = sample_interface(parse_expression("x1 - 0.13"), {0.05, -0.3, -0.4, -0.4},
                                     {0.35, 0.3, 0.4, 0.4}, {3, 4, 5, 5});
  std::vector<SurfacePoint> geo = interface_geometry(iface, m, -1);
  REQUIRE(!geo.empty());
  for (const SurfacePoint& g : geo) {
    CHECK(g.eps == 1.0);
    CHECK(std::fabs(g.k) < 1e-10);
    CHECK(value_norm(g.K) < 1e-10);
    CHECK(g.n_up(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.n_up(1) == doctest::Approx(1.0).epsilon(1e-12));
    double nn = 0.0;
    for (std::size_t a = 0; a < 4; ++a) nn += g.n_up(a) * g.n_down(a);
    CHECK(std::fabs(nn - g.eps) < 1e-10);
    // pullback annihilates the normal
    for (std::size_t mu = 0; mu < 4; ++mu) {
      double hn = 0.0;
      for (std::size_t nu = 0; nu < 4; ++nu) hn += g.h(mu, nu) * g.n_up(nu);
      CHECK(std::fabs(hn) < 1e-12);
    }
    REQUIRE(g.tangents.size() == 3);
    CHECK(g.tangent_sign[0] == -1.0);
    CHECK(g.tangent_sign[1] == 1.0);
    CHECK(g.tangent_sign[2] == 1.0);
  }
  std::vector<SurfacePoint> flipped = interface_geometry(iface, m, +1);
  CHECK(flipped[0].n_up(1) == doctest::Approx(-1.0).epsilon(1e-12));

  // a constant-time slice has a timelike normal
  Interface slice = sample_interface(parse_expression("x0 - 0.21"), {0.05, -0.3, -0.4, -0.4},
                                     {0.35, 0.3, 0.4, 0.4}, {4, 3, 4, 4});
  std::vector<SurfacePoint> sg = interface_geometry(slice, m, -1);
  for (const SurfacePoint& g : sg) {
    CHECK(g.eps == -1.0);
    CHECK(std::fabs(g.k) < 1e-10);
  }

  Interface nullface = sample_interface(parse_expression("x0 - x1"), {0.05, -0.3, -0.4, -0.4},
                                        {0.35, 0.3, 0.4, 0.4}, {4, 4, 4, 4});
  CHECK_THROWS_AS(interface_geometry(nullface, m, -1), std::domain_error);
}

TEST_CASE("cylinder mean curvature matches the closed form") {
  ChartGrid grid = make_grid({0.0, -1.2, -1.2, 0.0}, {0.4, 1.2, 1.2, 0.4}, {5, 25, 25, 5});
  MetricField m = minkowski_field(grid);
  Interface iface = sample_interface(parse_expression("x1^2 + x2^2 - 0.64"),
                                     {0.05, -1.0, -1.0, 0.05}, {0.35, 1.0, 1.0, 0.35},
                                     {3, 9, 9, 3});
  std::vector<SurfacePoint> geo = interface_geometry(iface, m, -1);
  REQUIRE(geo.size() > 20);
  for (const SurfacePoint& g : geo) {
    CHECK(g.k == doctest::Approx(1.0 / 0.8).epsilon(1e-8));
    CHECK(std::fabs(value_norm(g.K) - 1.0 / 0.8) < 1e-8);
    double gnn = 0.0;
    for (std::size_t a = 0; a < 4; ++a) gnn += g.n_up(a) * g.n_down(a);
    CHECK(std::fabs(gnn - 1.0) < 1e-10);
    // K is tangential
    for (std::size_t mu = 0; mu < 4; ++mu) {
      double kn = 0.0;
      for (std::size_t nu = 0; nu < 4; ++nu) kn += g.K(mu, nu) * g.n_up(nu);
      CHECK(std::fabs(kn) < 1e-10);
    }
  }

  // scaling the level set changes nothing
  Interface scaled = sample_interface(parse_expression("3*(x1^2 + x2^2 - 0.64)"),
                                      {0.05, -1.0, -1.0, 0.05}, {0.35, 1.0, 1.0, 0.35},
                                      {3, 9, 9, 3});
  std::vector<SurfacePoint> geo2 = interface_geometry(scaled, m, -1);
  REQUIRE(geo2.size() == geo.size());
  for (std::size_t i = 0; i < geo.size(); ++i) {
    CHECK(std::fabs(geo[i].k - geo2[i].k) < 1e-10);
    CHECK(value_norm(geo[i].n_down - geo2[i].n_down) < 1e-10);
    CHECK(value_norm(geo[i].K - geo2[i].K) < 1e-10);
  }
}

TEST_CASE("preliminary jumps see only genuine tangential mismatches") {
  ChartGrid gi = interior_box({5, 11, 11, 5});
  ChartGrid ge = exterior_box({5, 11, 11, 5});
  TwoSidedSolution sol = matched_solution(gi, ge);

  JumpReport rep = preliminary_jumps(sol);
  CHECK(rep.entry("tangential_metric").linf < 1e-10);
  CHECK(rep.entry("tangential_potential").linf < 1e-10);

  // a purely normal-normal metric jump is invisible to the pullback
  TwoSidedSolution gauge = sol;
  gauge.g_plus = build_metric_field(ge, [](const std::vector<double>& x) {
    TensorValue g = bent_metric(x);
    g(1, 1) += 0.2 + 0.1 * x[2] * x[2];
    return g;
  });
  JumpReport rep2 = preliminary_jumps(gauge);
  CHECK(rep2.entry("tangential_metric").linf < 1e-10);
  CHECK(rep2.entry("tangential_potential").linf < 1e-10);

  // a tangential jump is flagged
  TwoSidedSolution tang = sol;
  tang.g_plus = build_metric_field(ge, [](const std::vector<double>& x) {
    TensorValue g = bent_metric(x);
    g(2, 2) += 0.1;
    return g;
  });
  CHECK(preliminary_jumps(tang).entry("tangential_metric").linf > 0.05);
}

TEST_CASE("israel darmois accepts gauge and flags kinks") {
  ChartGrid gi = interior_box({5, 11, 11, 5});
  ChartGrid ge = exterior_box({5, 11, 11, 5});

  // the connection is rational in the coordinates, so its interpolation to
  // the samples carries scheme noise; matched sides agree to that level
  TwoSidedSolution matched = matched_solution(gi, ge);
  CHECK(israel_darmois(matched).entry("extrinsic_curvature").linf < 1e-5);

  // flat exterior written in stretched coordinates: zero curvature jump
  TwoSidedSolution gauge = matched;
  gauge.g_minus = minkowski_field(gi);
  gauge.g_plus = build_metric_field(ge, [](const std::vector<double>& x) {
    TensorValue g(4, {Slot::Down, Slot::Down});
    double psi = 1.0 + 0.3 * x[1];
    g(0, 0) = -1.0;
    g(1, 1) = psi * psi;
    g(2, 2) = 1.0;
    g(3, 3) = 1.0;
    return g;
  });
  CHECK(israel_darmois(gauge).entry("extrinsic_curvature").linf < 1e-10);

  // a metric kink across the surface carries extrinsic curvature
  TwoSidedSolution kink = gauge;
  kink.g_plus = build_metric_field(ge, [](const std::vector<double>& x) {
    TensorValue g(4, {Slot::Down, Slot::Down});
    g(0, 0) = -1.0;
    g(1, 1) = 1.0;
    g(2, 2) = 1.0 + 0.4 * x[1];
    g(3, 3) = 1.0;
    return g;
  });
  JumpReport rep = israel_darmois(kink);
  CHECK(rep.entry("extrinsic_curvature").linf == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(rep.entry("extrinsic_curvature").l2 == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("em jumps vanish for identical vacuum fields") {
  ChartGrid gi = interior_box({5, 11, 11, 5});
  ChartGrid ge = exterior_box({5, 11, 11, 5});
  TwoSidedSolution sol = matched_solution(gi, ge);
  JumpReport rep = em_jumps(sol);
  for (const char* name : {"velocity_normal", "stress_balance", "tangential_e", "normal_b",
                           "normal_d", "tangential_h", "poynting_normal"})
    CHECK(rep.entry(name).linf < 1e-10);
}

TEST_CASE("em jumps match the electrostatic dielectric benchmark") {
  ChartGrid gi = dielectric_interior({5, 11, 11, 5});
  ChartGrid ge = dielectric_exterior({5, 11, 9, 5});
  DielectricParams par;
  TwoSidedSolution coarse = dielectric_solution(gi, ge, par);
  TwoSidedSolution fine = dielectric_solution(gi.refined(), ge.refined(), par);
  JumpReport rep_c = em_jumps(coarse);
  JumpReport rep_f = em_jumps(fine);

  for (const char* name : {"stress_balance", "tangential_e", "normal_d"})
    check_ratio(rep_c.entry(name).linf, rep_f.entry(name).linf, 1e-5);
  for (const char* name : {"stress_balance", "tangential_e", "normal_d"})
    check_ratio(rep_c.entry(name).l2, rep_f.entry(name).l2, 1e-6);

  // statically exact pieces stay at rounding level
  for (const char* name : {"velocity_normal", "normal_b", "tangential_h", "poynting_normal"})
    CHECK(rep_c.entry(name).linf < 1e-12);

  // the potential is continuous across the surface and the metrics agree
  JumpReport pre = preliminary_jumps(coarse);
  CHECK(pre.entry("tangential_metric").linf < 1e-13);
  CHECK(pre.entry("tangential_potential").linf < 1e-11);

  // breaking tangential E is caught by the right residual
  DielectricParams broken = par;
  broken.tangential_break = 0.28;
  JumpReport rep_b = em_jumps(dielectric_solution(gi, ge, broken));
  CHECK(rep_b.entry("tangential_e").linf > 0.05);
  CHECK(rep_b.entry("normal_d").linf < 0.02);
}

TEST_CASE("poynting continuity follows from the tangential conditions") {
  // uniform fields, exact arithmetic: tangential E and H match while the
  // normal D and the traction are deliberately unbalanced
  double a = 0.4, b = 0.2, gam = 0.5, beta = 0.3, tau = 0.25;
  ChartGrid gi = interior_box({5, 9, 9, 5});
  ChartGrid ge = exterior_box({5, 9, 9, 5});
  TwoSidedSolution sol;
  sol.iface = planar_interface();
  sol.g_minus = minkowski_field(gi);
  sol.g_plus = minkowski_field(ge);
  sol.a_minus = sample_field(gi, {Slot::Down}, [&](const std::vector<double>& x) {
    TensorValue av(4, {Slot::Down});
    av(0) = a * x[2] + b * x[1];
    av(3) = beta * x[2];
    av(1) = tau * x[3];
    return av;
  });
  sol.a_plus = sample_field(ge, {Slot::Down}, [&](const std::vector<double>& x) {
    TensorValue av(4, {Slot::Down});
    av(0) = a * x[2] + gam * x[1];
    av(3) = beta * x[2];
    av(1) = tau * x[3];
    return av;
  });
  sol.u = constant_vector(gi, 0, 1.0);
  sol.rho = constant_scalar(gi, 1.3);
  sol.s = constant_scalar(gi, 1.0);
  sol.model = linear_model(parse_expression("rho^2 - s^2"), 0.5, 0.0);
  sol.c = 1.0;

  JumpReport rep = em_jumps(sol);
  CHECK(rep.entry("velocity_normal").linf < 1e-13);
  CHECK(rep.entry("tangential_e").linf < 1e-12);
  CHECK(rep.entry("normal_b").linf < 1e-12);
  CHECK(rep.entry("tangential_h").linf < 1e-12);
  CHECK(rep.entry("poynting_normal").linf < 1e-12);
  CHECK(rep.entry("normal_d").linf == doctest::Approx(gam - 1.5 * b).epsilon(1e-9));
  CHECK(rep.entry("stress_balance").linf > 0.1);

  // the energy flux itself is nonzero in this state
  MetricValue mk = minkowski_metric(4);
  TensorValue fv(4, {Slot::Down, Slot::Down});
  fv(1, 0) = b;
  fv(0, 1) = -b;
  fv(2, 0) = a;
  fv(0, 2) = -a;
  fv(2, 3) = beta;
  fv(3, 2) = -beta;
  fv(3, 1) = tau;
  fv(1, 3) = -tau;
  ObserverFrame fr{basis_vector(4, 0), 1.0};
  EMSplit eb = eb_decompose(FormValue::from_tensor(fv), fr, mk);
  FormValue flux = poynting(eb.E, eb.B, fr, mk);
  CHECK(value_norm(flux.tensor()) > 0.01);
}

TEST_CASE("einstein residual converges on the schwarzschild exterior") {
  ChartGrid grid = make_grid({0.0, 1.5, 1.0, 0.0}, {0.4, 2.5, 2.1, 0.4}, {5, 9, 9, 5});
  MetricField m_c = schwarzschild_field(grid, 0.3);
  MetricField m_f = schwarzschild_field(grid.refined(), 0.3);
  TensorField res_c = einstein_residual(m_c, TensorField(), 2.0);
  TensorField res_f = einstein_residual(m_f, TensorField(), 2.0);
  FieldNorms nc = field_norms(res_c, std::vector<std::size_t>{2, 2, 2, 2});
  FieldNorms nf = field_norms(res_f, std::vector<std::size_t>{4, 4, 4, 4});
  check_ratio(nc.linf, nf.linf, 1e-5);
  check_ratio(nc.l2, nf.l2, 1e-6);
}

TEST_CASE("reissner nordstrom coulomb field fixes the einstein coupling") {
  double mass = 0.35, charge = 0.3;
  auto residual_at = [&](const ChartGrid& grid, double chi) {
    MetricField m = reissner_nordstrom_field(grid, mass, charge);
    TensorField a = sample_field(grid, {Slot::Down}, [&](const std::vector<double>& x) {
      return reissner_nordstrom_potential(x, charge);
    });
    TensorField f = exterior_derivative(a);
    TensorField sem = maxwell_sem_field(f, m);
    return einstein_residual(m, sem, chi);
  };
  ChartGrid grid = make_grid({0.0, 1.6, 1.0, 0.0}, {0.4, 2.4, 2.1, 0.4}, {5, 9, 9, 5});
  TensorField res_c = residual_at(grid, 2.0);
  TensorField res_f = residual_at(grid.refined(), 2.0);
  FieldNorms nc = field_norms(res_c, std::vector<std::size_t>{2, 2, 2, 2});
  FieldNorms nf = field_norms(res_f, std::vector<std::size_t>{4, 4, 4, 4});
  check_ratio(nc.linf, nf.linf, 1e-5);
  check_ratio(nc.l2, nf.l2, 1e-6);

  // without the coupling the residual stalls at the size of the field's
  // stress tensor instead of converging
  FieldNorms nb_c = field_norms(residual_at(grid, 0.0), std::vector<std::size_t>{2, 2, 2, 2});
  FieldNorms nb_f = field_norms(residual_at(grid.refined(), 0.0),
                                std::vector<std::size_t>{4, 4, 4, 4});
  CHECK(nb_f.linf > 8.0 * nf.linf);
  CHECK(nb_c.linf / nb_f.linf < 2.0);
}

TEST_CASE("minkowski with a nonzero stress tensor reports minus chi times it") {
  ChartGrid grid = make_grid({0.0, -0.5, -0.5, -0.5}, {0.4, 0.5, 0.5, 0.5}, {5, 7, 7, 7});
  MetricField m = minkowski_field(grid);
  TensorField f(grid, {Slot::Down, Slot::Down});
  for (std::size_t p = 0; p < grid.num_points(); ++p) {
    TensorValue v(4, {Slot::Down, Slot::Down});
    v(0, 1) = 0.3;
    v(1, 0) = -0.3;
    v(2, 3) = 0.2;
    v(3, 2) = -0.2;
    f.set_value(p, v);
  }
  TensorField sem = maxwell_sem_field(f, m);
  double chi = 2.0;
  TensorField res = einstein_residual(m, sem, chi);
  TensorField expected(grid, {Slot::Down, Slot::Down});
  for (std::size_t p = 0; p < grid.num_points(); ++p) {
    MetricValue g = m.value(p);
    expected.set_value(p, -chi * lower_index(sem.value(p), 0, g));
  }
  CHECK(diff_norms(res, expected, 0).linf < 1e-13);
}

TEST_CASE("obrien synge residual tracks the curvature matching") {
  // matched flat case is exact
  ChartGrid gi = interior_box({5, 9, 9, 5});
  ChartGrid ge = exterior_box({5, 9, 9, 5});
  TwoSidedSolution flat = matched_solution(gi, ge);
  flat.g_minus = minkowski_field(gi);
  flat.g_plus = minkowski_field(ge);
  CHECK(obrien_synge(flat).entry("obrien_synge").linf < 1e-12);

  // two vacuum bands of the same solution on grids with different spacings;
  // the chart is sheared so the truncation error has tangential-normal
  // components and the residual is pure second-order discretization error
  auto sheared = [](const std::vector<double>& x) {
    double mass = 0.3, shear = 0.25;
    double r = x[1];
    double th = x[2] + shear * (x[1] - 1.8);
    double f = 1.0 - 2.0 * mass / r;
    double st = std::sin(th);
    TensorValue g(4, {Slot::Down, Slot::Down});
    g(0, 0) = -f;
    g(1, 1) = 1.0 / f + shear * shear * r * r;
    g(1, 2) = g(2, 1) = shear * r * r;
    g(2, 2) = r * r;
    g(3, 3) = r * r * st * st;
    return g;
  };
  auto band_solution = [&](const ChartGrid& gin, const ChartGrid& gex) {
    TwoSidedSolution sol;
    sol.iface = sample_interface(parse_expression("x1 - 1.8"), {0.05, 1.74, 1.35, 0.05},
                                 {0.35, 1.86, 1.75, 0.35}, {3, 3, 5, 3});
    sol.g_minus = build_metric_field(gin, sheared);
    sol.g_plus = build_metric_field(gex, sheared);
    sol.a_minus = TensorField(gin, {Slot::Down});
    sol.a_plus = TensorField(gex, {Slot::Down});
    sol.u = constant_vector(gin, 0, 1.0);
    sol.rho = constant_scalar(gin, 1.0);
    sol.s = constant_scalar(gin, 0.0);
    sol.model = maxwell_model();
    return sol;
  };
  // every node the extrapolation reads stays two nodes clear of the grid
  // boundaries, away from the one-sided-stencil error layer
  ChartGrid gin = make_grid({0.0, 1.3, 1.0, 0.0}, {0.4, 1.9, 2.1, 0.4}, {5, 9, 9, 5});
  ChartGrid gex = make_grid({0.0, 1.5, 0.75, 0.0}, {0.4, 2.3, 2.35, 0.4}, {5, 9, 9, 5});
  JumpReport rep_c = obrien_synge(band_solution(gin, gex));
  JumpReport rep_f = obrien_synge(band_solution(gin.refined(), gex.refined()));
  check_ratio(rep_c.entry("obrien_synge").linf, rep_f.entry("obrien_synge").linf, 1e-6);

  // a kink whose curvature varies along the surface leaks into the constraint
  TwoSidedSolution kinked = flat;
  kinked.g_plus = build_metric_field(ge, [](const std::vector<double>& x) {
    TensorValue g(4, {Slot::Down, Slot::Down});
    g(0, 0) = -1.0;
    g(1, 1) = 1.0;
    g(2, 2) = 1.0 + 0.35 * std::sin(1.3 * x[3]) * x[1];
    g(3, 3) = 1.0;
    return g;
  });
  CHECK(obrien_synge(kinked).entry("obrien_synge").linf > 0.02);
}

TEST_CASE("junction report is complete and invariant") {
  ChartGrid gi = dielectric_interior({5, 11, 11, 5});
  ChartGrid ge = dielectric_exterior({5, 11, 9, 5});
  DielectricParams par;
  TwoSidedSolution sol = dielectric_solution(gi, ge, par);

  JumpReport rep = junction_report(sol);
  const char* names[] = {"tangential_metric", "tangential_potential", "extrinsic_curvature",
                         "velocity_normal",   "stress_balance",       "tangential_e",
                         "normal_b",          "normal_d",             "tangential_h",
                         "poynting_normal",   "obrien_synge"};
  CHECK(rep.entries.size() == 11);
  for (const char* n : names) CHECK(rep.has(n));

  // rescaling the level set leaves every residual unchanged
  TwoSidedSolution scaled = dielectric_solution(gi, ge, par, "2*x1");
  check_reports_close(rep, junction_report(scaled), 1e-10);

  // flipping the normal orientation flips n but not the norms
  check_reports_close(rep, junction_report(sol, +1), 1e-12);
}

TEST_CASE("junction evaluation rejects malformed inputs") {
  ChartGrid gi = interior_box({5, 9, 9, 5});
  ChartGrid ge = exterior_box({5, 9, 9, 5});
  TwoSidedSolution sol = matched_solution(gi, ge);

  TwoSidedSolution no_model = sol;
  no_model.model = ModelSpec{};
  CHECK_THROWS_AS(em_jumps(no_model), std::invalid_argument);

  CHECK_THROWS_AS(preliminary_jumps(sol, 0), std::invalid_argument);

  // interior grid with fewer than three planes on its own side of the surface
  ChartGrid thin = make_grid({0.0, -0.1, -0.5, 0.0}, {0.48, 0.54, 0.5, 0.48}, {5, 9, 11, 5});
  TwoSidedSolution shallow = sol;
  shallow.g_minus = build_metric_field(thin, bent_metric);
  shallow.a_minus = sample_field(thin, {Slot::Down}, bent_potential);
  shallow.u = normalize_velocity_field(constant_vector(thin, 0, 1.0), shallow.g_minus, 1.0);
  shallow.rho = constant_scalar(thin, 1.1);
  shallow.s = constant_scalar(thin, 0.7);
  CHECK_THROWS_AS(preliminary_jumps(shallow), std::domain_error);

  TwoSidedSolution wrong = sol;
  wrong.u = TensorField(gi, {Slot::Down});
  CHECK_THROWS_AS(preliminary_jumps(wrong), std::invalid_argument);
}
