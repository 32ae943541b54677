#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "relcont/em.hpp"
#include "relcont/grid.hpp"
#include "relcont/tensor.hpp"
#include "test_helpers.hpp"

using namespace relcont;
using namespace relcont::testing;

namespace {

double gdot(const TensorValue& a, const TensorValue& b, const MetricValue& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.dim; ++i)
    for (std::size_t j = 0; j < g.dim; ++j) s += g.g(i, j) * a[i] * b[j];
  return s;
}

// remove the u-component so the result satisfies i_u(.) = 0
FormValue transverse_part(const FormValue& a, const ObserverFrame& fr, const MetricValue& g) {
  if (a.degree() == 0) return a;
  FormValue ub = flat(fr.u, g);
  double ic2 = 1.0 / (fr.c * fr.c);
  return a + ic2 * wedge(ub, interior_product(fr.u, a));
}

FormValue random_transverse(std::mt19937& rng, std::size_t dim, std::size_t k,
                            const ObserverFrame& fr, const MetricValue& g) {
  return transverse_part(random_form(rng, dim, k), fr, g);
}

double transverse_defect(const FormValue& a, const ObserverFrame& fr) {
  if (a.degree() == 0) return 0.0;
  return max_abs(interior_product(fr.u, a));
}

}  // namespace

TEST_CASE("normalize velocity: scaling, unit norm, failure modes") {
  MetricValue mink = minkowski_metric(4);

  ObserverFrame f = normalize_velocity(basis_vector(4, 0) * 2.0, mink);
  CHECK(max_abs_diff(f.u, basis_vector(4, 0)) == 0.0);
  CHECK(f.c == 1.0);

  TensorValue w = basis_vector(4, 0) + basis_vector(4, 1) * 0.5;
  ObserverFrame f2 = normalize_velocity(w, mink);
  CHECK(std::abs(gdot(f2.u, f2.u, mink) + 1.0) < 1e-12);
  // direction is preserved
  CHECK(std::abs(f2.u[1] / f2.u[0] - 0.5) < 1e-12);

  ObserverFrame f3 = normalize_velocity(w, mink, 2.0);
  CHECK(std::abs(gdot(f3.u, f3.u, mink) + 4.0) < 1e-12);

  CHECK_THROWS_AS((void)normalize_velocity(basis_vector(4, 1), mink), std::domain_error);
  // null vector is rejected too
  TensorValue null_w = basis_vector(4, 0) + basis_vector(4, 1);
  CHECK_THROWS_AS((void)normalize_velocity(null_w, mink), std::domain_error);
  CHECK_THROWS_AS((void)normalize_velocity(delta_tensor(4), mink), std::invalid_argument);
  CHECK_THROWS_AS((void)normalize_velocity(basis_vector(4, 0), mink, 0.0), std::invalid_argument);

  std::mt19937 rng(421);
  for (int it = 0; it < 20; ++it) {
    MetricValue g = random_metric(rng, 4);
    ObserverFrame fr = normalize_velocity(random_timelike(rng, 4), g);
    CHECK(std::abs(gdot(fr.u, fr.u, g) + 1.0) < 1e-12);
  }
}

TEST_CASE("projection tensor: rest-space projector algebra") {
  MetricValue mink = minkowski_metric(4);
  ObserverFrame fr{basis_vector(4, 0), 1.0};
  Projection pr = projection_tensor(fr, mink);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double want = (i == j && i > 0) ? 1.0 : 0.0;
      CHECK(pr.P(i, j) == want);
      CHECK(pr.p(i, j) == want);
    }

  std::mt19937 rng(914);
  for (int it = 0; it < 20; ++it) {
    std::size_t n = (it % 2 == 0) ? 4 : 3;
    MetricValue g = random_metric(rng, n);
    double c = (it % 3 == 0) ? 2.0 : 1.0;
    ObserverFrame f = normalize_velocity(random_timelike(rng, n), g, c);
    Projection pr2 = projection_tensor(f, g);

    // P u = 0
    for (std::size_t i = 0; i < n; ++i) {
      double pu = 0.0;
      for (std::size_t j = 0; j < n; ++j) pu += pr2.P(i, j) * f.u[j];
      CHECK(std::abs(pu) < 1e-12 * (1.0 + max_abs(f.u)));
    }
    // P P = P and trace P = n - 1
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      tr += pr2.P(i, i);
      for (std::size_t j = 0; j < n; ++j) {
        double pp = 0.0;
        for (std::size_t k = 0; k < n; ++k) pp += pr2.P(i, k) * pr2.P(k, j);
        CHECK(std::abs(pp - pr2.P(i, j)) < 1e-12);
      }
    }
    CHECK(std::abs(tr - double(n - 1)) < 1e-12);
    // p is P with the first slot lowered
    CHECK(max_abs_diff(lower_index(pr2.P, 0, g), pr2.p) < 1e-13);
  }
}

TEST_CASE("eb split: round trips, transversality, pure-electric field") {
  std::mt19937 rng(2203);
  for (std::size_t n : {3u, 4u}) {
    for (int it = 0; it < 20; ++it) {
      Orientation o{it % 2 == 0 ? 1 : -1};
      MetricValue g = random_metric(rng, n);
      ObserverFrame fr = normalize_velocity(random_timelike(rng, n), g);
      FormValue F = random_form(rng, n, 2);

      EMSplit s = eb_decompose(F, fr, g, o);
      CHECK(s.E.degree() == 1);
      CHECK(s.B.degree() == n - 3);
      CHECK(transverse_defect(s.E, fr) < 1e-10 * (1.0 + max_abs(F)));
      CHECK(transverse_defect(s.B, fr) < 1e-10 * (1.0 + max_abs(F)));

      FormValue back = eb_reconstruct(s, fr, g, o);
      CHECK(max_abs_diff(back, F) < 1e-12 * (1.0 + max_abs(F)));

      // opposite direction: transverse data is reproduced by the decomposition
      EMSplit t;
      t.E = random_transverse(rng, n, 1, fr, g);
      t.B = random_transverse(rng, n, n - 3, fr, g);
      EMSplit s2 = eb_decompose(eb_reconstruct(t, fr, g, o), fr, g, o);
      CHECK(max_abs_diff(s2.E, t.E) < 1e-12 * (1.0 + max_abs(t.E)));
      CHECK(max_abs_diff(s2.B, t.B) < 1e-12 * (1.0 + max_abs(t.B)));
    }
  }

  // a field with no magnetic part decomposes onto its electric seed
  MetricValue mink = minkowski_metric(4);
  ObserverFrame fr{basis_vector(4, 0), 1.0};
  EMSplit pure;
  pure.E = basis_form(4, {1}) * 2.0;
  pure.B = FormValue(4, 1);
  FormValue F = eb_reconstruct(pure, fr, mink, {});
  // u_flat ^ E = -2 dx0 ^ dx1
  CHECK(F(0, 1) == -2.0);
  CHECK(F(0, 2) == 0.0);
  EMSplit s = eb_decompose(F, fr, mink, {});
  CHECK(max_abs_diff(s.E, pure.E) < 1e-14);
  CHECK(max_abs(s.B) < 1e-14);

  FormValue zero(4, 2);
  EMSplit z = eb_decompose(zero, fr, mink, {});
  CHECK(max_abs(z.E) == 0.0);
  CHECK(max_abs(z.B) == 0.0);

  EMSplit bad;
  bad.E = basis_form(4, {0});  // i_u dx0 = -1, not transverse
  bad.B = FormValue(4, 1);
  CHECK_THROWS_AS((void)eb_reconstruct(bad, fr, mink, {}), std::invalid_argument);
  EMSplit wrong;
  wrong.E = basis_form(4, {1});
  wrong.B = FormValue(4, 2);
  CHECK_THROWS_AS((void)eb_reconstruct(wrong, fr, mink, {}), std::invalid_argument);
  CHECK_THROWS_AS((void)eb_decompose(basis_form(4, {1}), fr, mink, {}), std::invalid_argument);
}

TEST_CASE("dh split: vacuum relations and round trips") {
  std::mt19937 rng(5117);
  for (std::size_t n : {3u, 4u}) {
    for (int it = 0; it < 20; ++it) {
      Orientation o{it % 2 == 0 ? 1 : -1};
      MetricValue g = random_metric(rng, n);
      ObserverFrame fr = normalize_velocity(random_timelike(rng, n), g);

      FormValue theta = random_form(rng, n, n - 2);
      DHSplit s = dh_extract(theta, fr, g, o);
      CHECK(transverse_defect(s.D, fr) < 1e-10 * (1.0 + max_abs(theta)));
      CHECK(transverse_defect(s.H, fr) < 1e-10 * (1.0 + max_abs(theta)));
      CHECK(max_abs_diff(dh_assemble(s, fr, g, o), theta) < 1e-12 * (1.0 + max_abs(theta)));

      DHSplit t;
      t.D = random_transverse(rng, n, 1, fr, g);
      t.H = random_transverse(rng, n, n - 3, fr, g);
      DHSplit s2 = dh_extract(dh_assemble(t, fr, g, o), fr, g, o);
      CHECK(max_abs_diff(s2.D, t.D) < 1e-12 * (1.0 + max_abs(t.D)));
      CHECK(max_abs_diff(s2.H, t.H) < 1e-12 * (1.0 + max_abs(t.H)));

      // source-free constitutive map theta = -star F gives D = E, H = B
      FormValue F = random_form(rng, n, 2);
      EMSplit eb = eb_decompose(F, fr, g, o);
      DHSplit dh = dh_extract(-hodge_star(F, g, o), fr, g, o);
      CHECK(max_abs_diff(dh.D, eb.E) < 1e-12 * (1.0 + max_abs(F)));
      CHECK(max_abs_diff(dh.H, eb.B) < 1e-12 * (1.0 + max_abs(F)));
    }
  }

  MetricValue mink = minkowski_metric(4);
  ObserverFrame fr{basis_vector(4, 0), 1.0};
  DHSplit z = dh_extract(FormValue(4, 2), fr, mink, {});
  CHECK(max_abs(z.D) == 0.0);
  CHECK(max_abs(z.H) == 0.0);

  DHSplit bad;
  bad.D = basis_form(4, {0});
  bad.H = FormValue(4, 1);
  CHECK_THROWS_AS((void)dh_assemble(bad, fr, mink, {}), std::invalid_argument);
}

TEST_CASE("poynting: frozen component oracles and transversality") {
  MetricValue mink = minkowski_metric(4);
  ObserverFrame fr{basis_vector(4, 0), 1.0};

  // E along x1, B along x2 pushes energy along -x3 in this orientation
  FormValue S = poynting(basis_form(4, {1}), basis_form(4, {2}), fr, mink, {});
  CHECK(max_abs_diff(S, -1.0 * basis_form(4, {3})) < 1e-15);
  // orientation flip reverses the flux
  FormValue Sm = poynting(basis_form(4, {1}), basis_form(4, {2}), fr, mink, {-1});
  CHECK(max_abs_diff(Sm, basis_form(4, {3})) < 1e-15);

  // three dimensions: scalar magnetic companion
  MetricValue mink3 = minkowski_metric(3);
  ObserverFrame fr3{basis_vector(3, 0), 1.0};
  FormValue one(3, 0);
  one.raw()[0] = 1.0;
  FormValue S3 = poynting(basis_form(3, {1}), one, fr3, mink3, {});
  CHECK(max_abs_diff(S3, basis_form(3, {2})) < 1e-15);

  FormValue zero = poynting(FormValue(4, 1), basis_form(4, {2}), fr, mink, {});
  CHECK(max_abs(zero) == 0.0);

  std::mt19937 rng(633);
  for (std::size_t n : {3u, 4u}) {
    for (int it = 0; it < 10; ++it) {
      MetricValue g = random_metric(rng, n);
      ObserverFrame f = normalize_velocity(random_timelike(rng, n), g);
      FormValue E = random_transverse(rng, n, 1, f, g);
      FormValue X = random_transverse(rng, n, n - 3, f, g);
      FormValue s = poynting(E, X, f, g, {});
      CHECK(transverse_defect(s, f) < 1e-10 * (1.0 + max_abs(E) * max_abs(X)));
    }
  }
}

TEST_CASE("maxwell lagrangian: special configurations and the split identity") {
  MetricValue mink = minkowski_metric(4);
  ObserverFrame fr{basis_vector(4, 0), 1.0};

  EMSplit pure;
  pure.E = basis_form(4, {1}) * 2.0;
  pure.B = FormValue(4, 1);
  FormValue Fe = eb_reconstruct(pure, fr, mink, {});
  CHECK(maxwell_lagrangian(Fe, mink) == doctest::Approx(2.0).epsilon(1e-12));

  // null wave: |E| = |B|, E orthogonal to B
  EMSplit wave;
  wave.E = basis_form(4, {1});
  wave.B = basis_form(4, {2});
  FormValue Fw = eb_reconstruct(wave, fr, mink, {});
  CHECK(std::abs(maxwell_lagrangian(Fw, mink)) < 1e-14);

  CHECK(maxwell_lagrangian(FormValue(4, 2), mink) == 0.0);

  std::mt19937 rng(808);
  for (std::size_t n : {3u, 4u}) {
    for (int it = 0; it < 20; ++it) {
      MetricValue g = random_metric(rng, n);
      ObserverFrame f = normalize_velocity(random_timelike(rng, n), g);
      FormValue F = random_form(rng, n, 2);
      EMSplit s = eb_decompose(F, f, g, {});
      double lhs = maxwell_lagrangian(F, g);
      double rhs = 0.5 * form_inner(s.E, s.E, g) - 0.5 * form_inner(s.B, s.B, g);
      CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("maxwell stress: split expansion, trace, symmetry") {
  std::mt19937 rng(1909);
  for (std::size_t n : {3u, 4u}) {
    for (int it = 0; it < 20; ++it) {
      Orientation o{it % 2 == 0 ? 1 : -1};
      MetricValue g = random_metric(rng, n);
      ObserverFrame fr = normalize_velocity(random_timelike(rng, n), g, it % 4 == 0 ? 2.0 : 1.0);
      FormValue F = random_form(rng, n, 2);

      TensorValue ta = maxwell_sem(F, g);
      TensorValue te = maxwell_sem_eb(F, fr, g, o);
      double scale = 1.0 + max_abs(ta);
      CHECK(max_abs_diff(ta, te) < 1e-12 * scale);

      // trace picks up (2 - n/2) |F|^2; zero in four dimensions
      double tr = 0.0;
      for (std::size_t i = 0; i < n; ++i) tr += ta(i, i);
      double want = (2.0 - 0.5 * double(n)) * form_inner(F, F, g);
      CHECK(std::abs(tr - want) < 1e-12 * scale);

      // lowered tensor is symmetric
      TensorValue low = lower_index(ta, 0, g);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          CHECK(std::abs(low(i, j) - low(j, i)) < 1e-12 * scale);
    }
  }

  // pure electric field: observer energy density is |E|^2 / 2
  MetricValue mink = minkowski_metric(4);
  ObserverFrame fr{basis_vector(4, 0), 1.0};
  EMSplit pure;
  pure.E = basis_form(4, {1});
  pure.B = FormValue(4, 1);
  TensorValue t = maxwell_sem(eb_reconstruct(pure, fr, mink, {}), mink);
  CHECK(t(0, 0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(t(1, 1) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(t(2, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t(3, 3) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("lagrangian derivative incarnations agree under the duality map") {
  std::mt19937 rng(7741);
  for (std::size_t n : {3u, 4u}) {
    for (int it = 0; it < 20; ++it) {
      Orientation o{it % 2 == 0 ? 1 : -1};
      MetricValue g = random_metric(rng, n);
      ObserverFrame fr = normalize_velocity(random_timelike(rng, n), g);
      DHSplit s;
      s.D = random_transverse(rng, n, 1, fr, g);
      s.H = random_transverse(rng, n, n - 3, fr, g);

      TensorValue x2 = dlldf_multivector(s, fr, g, o);
      FormValue lhs = density_dual_form(x2, g, o);
      FormValue rhs = dh_assemble(s, fr, g, o);
      CHECK(max_abs_diff(lhs, rhs) < 1e-12 * (1.0 + max_abs(rhs)));

      // source-free case: the multivector incarnation is -F with raised slots
      FormValue F = random_form(rng, n, 2);
      DHSplit dh = dh_extract(-hodge_star(F, g, o), fr, g, o);
      TensorValue got = dlldf_multivector(dh, fr, g, o);
      TensorValue want = -sharp(F, g);
      CHECK(max_abs_diff(got, want) < 1e-12 * (1.0 + max_abs(want)));
    }
  }
}

TEST_CASE("field wrappers track the pointwise operations") {
  std::mt19937 rng(351);
  ChartGrid grid = make_grid({0, 0, 0, 0}, {1, 1, 1, 1}, {5, 5, 5, 5});
  TrigMetricFn gfn(rng, 4, 0.04);
  MetricField mf = gfn.sample(grid);

  TrigTensorFn wfn(rng, 4, {Slot::Up}, 0.2);
  TensorField w = sample_field(grid, {Slot::Up}, [&](const std::vector<double>& x) {
    TensorValue v = wfn(x);
    v[0] += 2.0;  // keep it timelike
    return v;
  });
  TensorField u = normalize_velocity_field(w, mf, 1.0);

  TrigTensorFn ffn(rng, 4, {Slot::Down, Slot::Down}, 0.8, true);
  TensorField F = ffn.sample(grid);
  TensorField sem = maxwell_sem_field(F, mf);
  EMSplitField eb = eb_decompose_field(F, u, 1.0, mf);

  for (std::size_t p = 0; p < grid.num_points(); p += 97) {
    MetricValue gp = mf.value(p);
    ObserverFrame fr = normalize_velocity(w.value(p), gp, 1.0);
    CHECK(max_abs_diff(u.value(p), fr.u) < 1e-14);
    CHECK(std::abs(gdot(fr.u, fr.u, gp) + 1.0) < 1e-12);

    FormValue fp;
    fp.raw() = F.value(p);
    CHECK(max_abs_diff(sem.value(p), maxwell_sem(fp, gp)) < 1e-14);
    EMSplit s = eb_decompose(fp, fr, gp, mf.orient);
    CHECK(max_abs_diff(eb.E.value(p), s.E.tensor()) < 1e-14);
    CHECK(max_abs_diff(eb.B.value(p), s.B.tensor()) < 1e-14);
  }

  TensorField space = sample_field(grid, {Slot::Up}, [](const std::vector<double>&) {
    return basis_vector(4, 1);
  });
  CHECK_THROWS_WITH_AS((void)normalize_velocity_field(space, mf, 1.0),
                       "velocity is not timelike at point (0, 0, 0, 0)", std::domain_error);
}
