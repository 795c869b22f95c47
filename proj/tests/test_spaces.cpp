#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace twistlab;
using Catch::Approx;

namespace {
Vector make_vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}
}  // namespace

TEST_CASE("lp_norm basics") {
  CHECK(lp_norm(2, make_vec({3, 4})) == Approx(5.0).epsilon(1e-14));
  CHECK(lp_norm(1, make_vec({1, -2, 3})) == Approx(6.0).epsilon(1e-14));
  CHECK(lp_norm(kInf, make_vec({1, -5, 2})) == 5.0);
  CHECK(lp_norm(3, Vector::Zero(4)) == 0.0);
  CHECK_THROWS_AS(lp_norm(0.5, make_vec({1})), InvalidParameter);
}

TEST_CASE("decreasing rearrangement") {
  Vector r = decreasing_rearrangement(make_vec({-2, 3, 1}));
  CHECK(r[0] == 3.0);
  CHECK(r[1] == 2.0);
  CHECK(r[2] == 1.0);
  Vector z = decreasing_rearrangement(make_vec({0, 0}));
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);

  // property: output is a non-increasing permutation of |x|
  Rng rng(42);
  for (int t = 0; t < 50; ++t) {
    Vector x = rng.gaussian_vector(12);
    Vector s = decreasing_rearrangement(x);
    Vector a = x.cwiseAbs();
    std::sort(a.data(), a.data() + a.size());
    for (Eigen::Index i = 0; i + 1 < s.size(); ++i) CHECK(s[i] >= s[i + 1]);
    for (Eigen::Index i = 0; i < s.size(); ++i)
      CHECK(s[i] == a[a.size() - 1 - i]);
  }
}

TEST_CASE("luxemburg norm") {
  NFunction sq = NFunction::power(2.0);
  CHECK(luxemburg_norm(sq, make_vec({3, 4})) == Approx(5.0).margin(1e-11));
  CHECK(luxemburg_norm(sq, Vector::Zero(3)) == 0.0);

  // frozen from an independent bisection of phi(1/r) = 1 for
  // phi(t) = t^2 log^2(t + e)
  NFunction plog = NFunction::power_log(2.0, 2.0);
  const double frozen = 1.2567506185377672;
  CHECK(luxemburg_norm(plog, Vector::Unit(5, 0)) == Approx(frozen).margin(1e-11));
  double oracle = oracles::single_coordinate_gauge([&](double t) { return plog(t); });
  CHECK(luxemburg_norm(plog, Vector::Unit(5, 0)) == Approx(oracle).margin(1e-11));
}

TEST_CASE("luxemburg of t^p coincides with lp") {
  Rng rng(7);
  for (double p : {1.5, 2.0, 3.0}) {
    NFunction phi = NFunction::power(p);
    for (int t = 0; t < 34; ++t) {
      int n = 1 + static_cast<int>(rng.next_u64() % 64);
      Vector x = rng.gaussian_vector(n);
      CHECK(luxemburg_norm(phi, x) == Approx(lp_norm(p, x)).margin(1e-10));
    }
  }
}

TEST_CASE("lorentz norm") {
  CHECK(lorentz_norm(2, 2, make_vec({1, 1, 1, 1})) == Approx(2.0).epsilon(1e-14));
  CHECK(lorentz_norm(1, 1, make_vec({1, -2})) == Approx(3.0).epsilon(1e-14));
  // p=2, q=1: 1 + (sqrt(2) - 1) = sqrt(2) by direct evaluation of the weights
  CHECK(lorentz_norm(2, 1, make_vec({1, 1})) == Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(lorentz_norm(0.9, 1, make_vec({1})), InvalidParameter);

  SECTION("p = q reduces to lp") {
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
      int n = 1 + static_cast<int>(rng.next_u64() % 32);
      Vector x = rng.gaussian_vector(n);
      double p = 1.0 + 3.0 * rng.uniform();
      CHECK(lorentz_norm(p, p, x) == Approx(lp_norm(p, x)).margin(1e-10));
    }
  }
  SECTION("rearrangement invariance") {
    Rng rng(13);
    for (int t = 0; t < 30; ++t) {
      Vector x = rng.gaussian_vector(10);
      std::vector<int> perm(10);
      for (int i = 0; i < 10; ++i) perm[i] = i;
      for (int i = 9; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
      Vector px(10);
      for (int i = 0; i < 10; ++i) px[i] = x[perm[i]];
      CHECK(lorentz_norm(2.5, 1.5, x) == Approx(lorentz_norm(2.5, 1.5, px)).epsilon(1e-13));
    }
  }
}

TEST_CASE("composite norms") {
  NormSpec w12 = NormSpec::weighted(NormSpec::lp(1.0), make_vec({1, 2}));
  NormSpec w21 = NormSpec::weighted(NormSpec::lp(1.0), make_vec({2, 1}));
  FiniteSpace sp_w(2, w12);
  CHECK(sp_w.norm(make_vec({1, 1})) == Approx(3.0).epsilon(1e-14));

  FiniteSpace sp_int(2, NormSpec::intersection(w12, w21));
  CHECK(sp_int.norm(make_vec({1, 1})) == Approx(3.0).epsilon(1e-14));

  FiniteSpace sp_sum(2, NormSpec::sum(w12, w21));
  // LP oracle over decompositions: optimum x0 = (1, 0), x1 = (0, 1)
  CHECK(sp_sum.norm(make_vec({1, 1})) == Approx(2.0).margin(1e-7));

  SECTION("sum norm vs the weighted-l1 separable oracle") {
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
      int n = 2 + static_cast<int>(rng.next_u64() % 6);
      Vector wa(n), wb(n), x(n);
      for (int i = 0; i < n; ++i) {
        wa[i] = std::exp(rng.uniform(-1, 1));
        wb[i] = std::exp(rng.uniform(-1, 1));
        x[i] = rng.normal();
      }
      FiniteSpace sum_sp(n, NormSpec::sum(NormSpec::weighted(NormSpec::lp(1.0), wa),
                                          NormSpec::weighted(NormSpec::lp(1.0), wb)));
      double got = sum_sp.norm(x);
      double want = oracles::weighted_l1_sum_norm(wa, wb, x);
      CHECK(got == Approx(want).epsilon(1e-7));
    }
  }
}

TEST_CASE("norm axioms on random specs") {
  Rng rng(23);
  auto check_axioms = [&](const FiniteSpace& sp) {
    for (int t = 0; t < 100; ++t) {
      Vector x = rng.gaussian_vector(sp.dim);
      double lam = rng.normal();
      double nx = sp.norm(x);
      CHECK(sp.norm(lam * x) == Approx(std::abs(lam) * nx).margin(1e-9 * (1 + nx)));
      CHECK(nx >= 0.0);
    }
    CHECK(sp.norm(Vector::Zero(sp.dim)) == 0.0);
    CHECK(sp.norm(Vector::Unit(sp.dim, 0)) > 0.0);
  };
  check_axioms(FiniteSpace(6, NormSpec::lp(1.7)));
  check_axioms(FiniteSpace(6, NormSpec::lorentz(2.0, 1.0)));
  check_axioms(FiniteSpace(6, NormSpec::orlicz(NFunction::power_log(2.0, 2.0))));
  Vector w(6);
  for (int i = 0; i < 6; ++i) w[i] = std::exp(0.2 * (i + 1));
  check_axioms(FiniteSpace(6, NormSpec::weighted(NormSpec::lp(2.0), w)));
}

TEST_CASE("max/min weight sandwiches for intersection and sum") {
  // For weighted versions of a common lattice base:
  //   max-norm <= ||. ||_{X(max w)} <= 2 max-norm  and
  //   ||.||_{X(min w)} <= sum-norm <= 2 ||.||_{X(min w)}
  Rng rng(29);
  for (int t = 0; t < 25; ++t) {
    int n = 2 + static_cast<int>(rng.next_u64() % 8);
    Vector wa(n), wb(n), x(n);
    for (int i = 0; i < n; ++i) {
      wa[i] = std::exp(rng.uniform(-1.5, 1.5));
      wb[i] = std::exp(rng.uniform(-1.5, 1.5));
      x[i] = rng.normal();
    }
    NormSpec base = (t % 2 == 0) ? NormSpec::lp(1.0) : NormSpec::lp(2.0);
    NormSpec A = NormSpec::weighted(base, wa), B = NormSpec::weighted(base, wb);
    FiniteSpace inter(n, NormSpec::intersection(A, B));
    FiniteSpace sum(n, NormSpec::sum(A, B));
    Vector wmax(n), wmin(n);
    for (int i = 0; i < n; ++i) {
      wmax[i] = std::max(wa[i], wb[i]);
      wmin[i] = std::min(wa[i], wb[i]);
    }
    FiniteSpace vee(n, NormSpec::weighted(base, wmax));
    FiniteSpace wedge(n, NormSpec::weighted(base, wmin));
    double ni = inter.norm(x), nv = vee.norm(x);
    CHECK(nv >= ni * (1 - 1e-12));
    CHECK(nv <= 2 * ni * (1 + 1e-12));
    double ns = sum.norm(x), nw = wedge.norm(x);
    CHECK(ns >= nw * (1 - 1e-9));
    CHECK(ns <= 2 * nw * (1 + 1e-7));
  }
}

TEST_CASE("nfunction validation and shape") {
  CHECK_THROWS_AS(NFunction::power(0.5), InvalidParameter);
  NFunction f = NFunction::power_log(2.0, 2.0);
  CHECK(f.is_n_function(1e-4, 1e4, 80));
  CHECK(std::isfinite(f.delta2_constant()));
  CHECK(f(0.0) == 0.0);
  CHECK(f.inverse(0.0) == 0.0);
  double y = f(1.7);
  CHECK(f.inverse(y) == Approx(1.7).margin(1e-10));

  NFunction tab = NFunction::table({0.0, 1.0, 2.0, 4.0}, {0.0, 1.0, 4.0, 16.0});
  CHECK(tab(1.5) == Approx(2.5).epsilon(1e-14));  // piecewise linear
  CHECK(tab.inverse(4.0) == Approx(2.0).margin(1e-10));
  CHECK_THROWS_AS(NFunction::table({0.0, 1.0}, {0.1, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(NFunction::table({0.0, 1.0, 0.5}, {0.0, 1.0, 2.0}), InvalidParameter);
}

TEST_CASE("norm error paths") {
  FiniteSpace sp(3, NormSpec::lp(2.0));
  CHECK_THROWS_AS(sp.norm(Vector::Zero(4)), DimensionMismatch);
  Vector bad(3);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN(), 0.0;
  CHECK_THROWS_AS(sp.norm(bad), InvalidParameter);
  CHECK_THROWS_AS(NormSpec::weighted(NormSpec::lp(1.0), make_vec({1.0, -2.0})), InvalidParameter);
}
