#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gcf;

namespace {

std::vector<Scalar> exact(std::initializer_list<int> v) { return std::vector<Scalar>(v.begin(), v.end()); }

HermitianMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  return HermitianMatrix(ComplexMatrix(a + a.adjoint()));
}

/// Strictly interlacing pair with |b| = k drawn from 2k+1 sorted uniforms.
InterlacingPair random_strict_pair(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> v(2 * k + 1);
  for (auto& x : v) x = u(rng);
  std::sort(v.rbegin(), v.rend());
  InterlacingPair p;
  for (int i = 0; i <= 2 * k; ++i) (i % 2 ? p.b : p.a).push_back(Scalar(v[i]));
  return p;
}

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

}  // namespace

TEST(Jacobi, MatchesEigenSolver) {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 9; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      auto h = random_hermitian(n, rng);
      auto eig = jacobi_eigen(h);
      EXPECT_LT(max_abs_diff(eig.values, oracle::eigen_desc(h.matrix())), 1e-10);
      EXPECT_TRUE(std::is_sorted(eig.values.rbegin(), eig.values.rend()));
      ComplexMatrix v = eig.vectors;
      EXPECT_LT((v.adjoint() * v - ComplexMatrix::Identity(n, n)).norm(), 1e-10);
      Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(eig.values.data(), n);
      ComplexMatrix rebuilt = v * d.cast<Complex>().asDiagonal() * v.adjoint();
      EXPECT_LT((rebuilt - h.matrix()).norm(), 1e-9 * std::max(1.0, h.matrix().norm()));
    }
  }
}

TEST(Hermitian, SetMirrorsAndRejectsComplexDiagonal) {
  HermitianMatrix h(2);
  h.set(0, 1, Complex(1, 2));
  EXPECT_EQ(h(1, 0), Complex(1, -2));
  EXPECT_THROW(h.set(0, 0, Complex(0, 1)), DomainError);
  EXPECT_THROW(HermitianMatrix(ComplexMatrix(2, 3)), DomainError);
}

TEST(GCMap, Diagonal) {
  auto spec = parse_lambda("1,0,-1");
  auto u = gc_map(HermitianMatrix::diagonal({1, 0, -1}), spec);
  EXPECT_NEAR(u(1, 1).to_double(), 1, 1e-12);
  EXPECT_NEAR(u(1, 2).to_double(), 1, 1e-12);
  EXPECT_NEAR(u(2, 1).to_double(), 0, 1e-12);
}

TEST(GCMap, TwoByTwo) {
  HermitianMatrix x(2);
  x.set(0, 1, 1.0);
  auto u = gc_map(x, parse_lambda("1,-1"));
  EXPECT_NEAR(u(1, 1).to_double(), 0, 1e-12);
  EXPECT_THROW(gc_map(x, parse_lambda("2,-1")), SpectrumError);
  EXPECT_THROW(gc_map(x, parse_lambda("1,0,-1")), SpectrumError);
}

TEST(GCMap, RandomConjugatesLandInPolytope) {
  std::mt19937_64 rng(5);
  for (const char* text : {"1,0,-1", "2,2,1,0", "3,1,1,0,-2"}) {
    auto spec = parse_lambda(text);
    std::vector<double> lam;
    for (const auto& v : spec.values()) lam.push_back(v.to_double());
    for (int rep = 0; rep < 200; ++rep) {
      auto q = oracle::random_unitary(spec.n(), rng);
      Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(lam.data(), spec.n());
      HermitianMatrix x(ComplexMatrix(q * d.cast<Complex>().asDiagonal() * q.adjoint()));
      auto u = gc_map(x, spec);
      EXPECT_TRUE(contains(u, spec, 1e-9));
      EXPECT_GE(oracle::interlacing_slack(oracle::leading_spectra(x.matrix())), -1e-9);
    }
  }
}

TEST(FiberSystem, TwoByTwoSymmetric) {
  auto sol = solve_fiber_system({exact({1, -1}), exact({0})});
  ASSERT_EQ(sol.fixed_radii.size(), 1u);
  EXPECT_NEAR(sol.fixed_radii[0].second, 1, 1e-12);
  EXPECT_NEAR(sol.corner, 0, 1e-12);
  EXPECT_TRUE(sol.zero_indices.empty());
  EXPECT_TRUE(sol.sphere_groups.empty());
}

TEST(FiberSystem, TwoByTwoShifted) {
  InterlacingPair p{exact({2, 0}), exact({1})};
  auto sol = solve_fiber_system(p);
  ASSERT_EQ(sol.fixed_radii.size(), 1u);
  EXPECT_NEAR(sol.fixed_radii[0].second, 1, 1e-12);
  EXPECT_NEAR(sol.corner, 1, 1e-12);
  auto m = assemble_matrix(p, sol, {Complex(1, 0)});
  EXPECT_LT(max_abs_diff(oracle::eigen_desc(m.matrix()), {2, 0}), 1e-12);
}

TEST(FiberSystem, SphereGroupOfF3Vertex) {
  InterlacingPair p{exact({1, 0, -1}), exact({0, 0})};
  auto sol = solve_fiber_system(p);
  ASSERT_EQ(sol.sphere_groups.size(), 1u);
  EXPECT_EQ(sol.sphere_groups[0].indices, (std::vector<int>{0, 1}));
  EXPECT_NEAR(sol.sphere_groups[0].radius_sq, 1, 1e-12);
  EXPECT_NEAR(sol.corner, 0, 1e-12);
  EXPECT_EQ(sol.spheres(), (std::vector<int>{3}));
  auto m = assemble_matrix(p, sol, {Complex(1, 0), Complex(0, 0)});
  EXPECT_LT(max_abs_diff(oracle::eigen_desc(m.matrix()), {1, 0, -1}), 1e-12);
  for (double x : {0.3, -2.0, 1.7}) EXPECT_NEAR(std::abs(oracle::char_poly(m.matrix(), x) - x * (x * x - 1)), 0, 1e-12);
}

TEST(FiberSystem, ZerosFromTies) {
  auto sol = solve_fiber_system({exact({1, 1, 0}), exact({1, 0})});
  EXPECT_EQ(sol.zero_indices, (std::vector<int>{0, 1}));
  EXPECT_EQ(sol.dimension(), 0);
  EXPECT_NEAR(sol.corner, 1, 1e-12);
}

TEST(FiberSystem, RejectsNonInterlacing) {
  EXPECT_THROW(solve_fiber_system({exact({1, 0}), exact({2})}), DomainError);
  EXPECT_THROW(solve_fiber_system({exact({1, 0}), exact({0, 0})}), DomainError);
}

TEST(FiberSystem, AssembleRejectsWrongRadii) {
  InterlacingPair p{exact({1, -1}), exact({0})};
  auto sol = solve_fiber_system(p);
  EXPECT_THROW(assemble_matrix(p, sol, {Complex(2, 0)}), DomainError);
  EXPECT_THROW(assemble_matrix(p, sol, {}), DomainError);
  auto m = assemble_matrix(p, sol, {Complex(1, 0)});
  EXPECT_EQ(m(0, 1), Complex(1, 0));
  EXPECT_EQ(m(0, 0), Complex(0, 0));
}

TEST(FiberSystem, ScalingScalesRadiiQuadratically) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    auto p = random_strict_pair(3, rng);
    InterlacingPair q;
    for (const auto& x : p.a) q.a.push_back(Scalar(3 * x.to_double()));
    for (const auto& x : p.b) q.b.push_back(Scalar(3 * x.to_double()));
    auto s = solve_fiber_system(p), t = solve_fiber_system(q);
    ASSERT_EQ(s.fixed_radii.size(), t.fixed_radii.size());
    for (std::size_t i = 0; i < s.fixed_radii.size(); ++i)
      EXPECT_NEAR(t.fixed_radii[i].second, 9 * s.fixed_radii[i].second, 1e-9 * std::max(1.0, t.fixed_radii[i].second));
  }
}

TEST(FiberSystem, StrictPairsMatchClosedForm) {
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const int k = 1 + rep % 5;
    auto p = random_strict_pair(k, rng);
    auto sol = solve_fiber_system(p);
    ASSERT_EQ(static_cast<int>(sol.fixed_radii.size()), k);
    std::vector<double> a, b;
    for (const auto& x : p.a) a.push_back(x.to_double());
    for (const auto& x : p.b) b.push_back(x.to_double());
    auto delta = oracle::delta_closed_form(a, b);
    for (auto [i, r2] : sol.fixed_radii) worst = std::max(worst, std::abs(r2 - delta[i]) / std::max(1.0, delta[i]));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(FiberSystem, ReconstructedSpectrumMatches) {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 500; ++rep) {
    auto p = random_strict_pair(1 + rep % 6, rng);
    auto sol = solve_fiber_system(p);
    auto m = assemble_matrix(p, sol, random_fiber_choice(sol, p.b.size(), rng));
    std::vector<double> a;
    for (const auto& x : p.a) a.push_back(x.to_double());
    EXPECT_LT(max_abs_diff(oracle::eigen_desc(m.matrix()), a), 1e-9 * 5);
  }
}

TEST(Sampler, InteriorRoundTrip) {
  auto d = build_ladder(parse_lambda("1,0,-1"));
  auto p = interior_point(improper_face(d));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto x = sample_fiber(d->spec(), p, seed);
    EXPECT_LT(gc_deviation(x, p), 1e-9);
    auto u = gc_map(x, d->spec());
    EXPECT_EQ(locate_face(u, d, 1e-8), improper_face(d));
  }
}

TEST(Sampler, V3SamplesDifferButShareTheirPoint) {
  auto v3 = fixtures::f3_v3();
  const auto& spec = v3.diagram().spec();
  auto p = interior_point(v3);
  auto x = sample_fiber(spec, p, 1);
  auto y = sample_fiber(spec, p, 2);
  EXPECT_GT((x.matrix() - y.matrix()).norm(), 1e-3);
  EXPECT_LT(gc_deviation(x, p), 1e-9);
  EXPECT_LT(gc_deviation(y, p), 1e-9);
}

TEST(Sampler, ProjectiveLineVertexIsDiagonal) {
  auto d = build_ladder(parse_lambda("1,0"));
  for (const auto& f : enumerate_faces(d)) {
    if (face_dimension(f) != 0) continue;
    auto p = interior_point(f);
    auto x = sample_fiber(d->spec(), p, 9);
    EXPECT_NEAR(x(0, 0).real(), p(1, 1).to_double(), 1e-12);
    EXPECT_NEAR(std::abs(x(0, 1)), 0, 1e-12);
  }
}

TEST(Sampler, SameSeedSameBits) {
  auto f = fixtures::su3_origin();
  auto p = interior_point(f);
  auto x = sample_fiber(f.diagram().spec(), p, 42);
  auto y = sample_fiber(f.diagram().spec(), p, 42);
  EXPECT_TRUE(x.matrix() == y.matrix());
}

TEST(Sampler, RejectsPointsOutside) {
  auto spec = parse_lambda("1,0");
  GCPoint p(spec);
  p.set({1, 1}, Scalar(2));
  EXPECT_THROW(sample_fiber(spec, p, 0), DomainError);
}

TEST(Verify, F3Vertex) {
  auto rep = verify_face(fixtures::f3_v3(), 10, 7);
  EXPECT_TRUE(rep.pass());
  ASSERT_EQ(rep.stages.size(), 2u);
  EXPECT_EQ(rep.stages[1].analytic, (std::vector<int>{3}));
  EXPECT_EQ(rep.empirical_dim, 3);
  EXPECT_EQ(rep.combinatorial_dim, 3);
}

TEST(Verify, Grassmannian24Gamma) {
  auto rep = verify_face(fixtures::gr24_gamma(), 10, 7);
  EXPECT_TRUE(rep.pass());
  std::vector<int> dims;
  for (const auto& s : rep.stages) {
    int t = 0;
    for (int x : s.analytic) t += x;
    dims.push_back(t);
  }
  EXPECT_EQ(dims, (std::vector<int>{0, 3, 1}));
  EXPECT_EQ(rep.empirical_dim, 4);
}

TEST(Verify, ImproperFaceIsAllCircles) {
  for (const char* text : {"1,0,-1", "1,1,0,0", "2,1,1,0,0"}) {
    auto d = build_ladder(parse_lambda(text));
    auto rep = verify_face(improper_face(d), 5, 1);
    EXPECT_TRUE(rep.pass());
    for (const auto& s : rep.stages)
      for (int x : s.analytic) EXPECT_EQ(x, 1);
    EXPECT_EQ(rep.empirical_dim, complex_dimension(d->spec()));
  }
}

TEST(Verify, EveryFaceOfSmallSpecs) {
  for (const char* text : {"1,0", "1,0,-1", "1,1,0,0", "2,1,1,0", "3,2,1,0"}) {
    for (const auto& f : enumerate_faces(build_ladder(parse_lambda(text)))) {
      auto rep = verify_face(f, 3, 11);
      ASSERT_TRUE(rep.pass()) << text << " " << f.id() << ": " << (rep.failures.empty() ? "" : rep.failures[0]);
    }
  }
}

TEST(Verify, FloatSpectrum) {
  auto d = build_ladder(parse_lambda("0.75,0.75,-0.5,-1.25"));
  for (const auto& f : enumerate_faces(d)) EXPECT_TRUE(verify_face(f, 3, 5).pass()) << f.id();
}
