#pragma once

// Hermitian-matrix oracle: cyclic Jacobi eigen-solver, the GC map, the
// arrow-matrix fiber system of one stage, stagewise fiber sampling and the
// cross-check of a face against its combinatorial fiber.

#include "gcfibers/blocks.hpp"
#include "gcfibers/errors.hpp"
#include "gcfibers/flag_core.hpp"
#include "gcfibers/ladder.hpp"
#include "gcfibers/polytope.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gcf {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Square complex matrix kept equal to its conjugate transpose.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(int size) : m_(ComplexMatrix::Zero(size, size)) {}
  /// Takes the Hermitian part (A + A*)/2, which is A itself for Hermitian input.
  explicit HermitianMatrix(const ComplexMatrix& a) : m_((a + a.adjoint()) / 2.0) {
    if (a.rows() != a.cols()) throw DomainError("Hermitian matrix must be square");
  }

  static HermitianMatrix diagonal(const std::vector<double>& d) {
    HermitianMatrix h(static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) h.m_(i, i) = d[i];
    return h;
  }

  int size() const { return static_cast<int>(m_.rows()); }
  Complex operator()(int r, int c) const { return m_(r, c); }

  /// Sets entry (r, c) and its mirror; diagonal entries must be real.
  void set(int r, int c, Complex v) {
    if (r == c) {
      if (v.imag() != 0.0) throw DomainError("diagonal entry of a Hermitian matrix must be real");
      m_(r, r) = v;
      return;
    }
    m_(r, c) = v;
    m_(c, r) = std::conj(v);
  }

  const ComplexMatrix& matrix() const { return m_; }
  HermitianMatrix leading(int k) const { return HermitianMatrix(ComplexMatrix(m_.topLeftCorner(k, k))); }

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // columns match values
  int sweeps = 0;
};

/// Cyclic complex Jacobi: each step first rotates the phase of a_pq away,
/// then applies a real Givens rotation zeroing it.
inline EigenDecomposition jacobi_eigen(const HermitianMatrix& h, double tol = 1e-12, int max_sweeps = 100) {
  const int n = h.size();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  auto off = [&] {
    double s = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += std::norm(a(p, q));
    return std::sqrt(2 * s);
  };
  int sweep = 0;
  for (; sweep < max_sweeps && off() > tol * scale; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r <= 1e-300) continue;
        const Complex phase = a(p, q) / r;  // e^{iφ}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(1 + t * t);
        const double s = t * c;
        // U restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]].
        const Complex upp = c, upq = s, uqp = -s * std::conj(phase), uqq = c * std::conj(phase);
        for (int k = 0; k < n; ++k) {
          Complex kp = a(k, p), kq = a(k, q);
          a(k, p) = kp * upp + kq * uqp;
          a(k, q) = kp * upq + kq * uqq;
          Complex vp = v(k, p), vq = v(k, q);
          v(k, p) = vp * upp + vq * uqp;
          v(k, q) = vp * upq + vq * uqq;
        }
        for (int k = 0; k < n; ++k) {
          Complex pk = a(p, k), qk = a(q, k);
          a(p, k) = std::conj(upp) * pk + std::conj(uqp) * qk;
          a(q, k) = std::conj(upq) * pk + std::conj(uqq) * qk;
        }
        a(p, q) = a(q, p) = 0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (off() > tol * scale * 10) throw NumericalError("Jacobi eigen-solver did not converge");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x).real() > a(y, y).real(); });
  EigenDecomposition out;
  out.sweeps = sweep;
  out.vectors = ComplexMatrix(n, n);
  for (int c = 0; c < n; ++c) {
    out.values.push_back(a(order[c], order[c]).real());
    out.vectors.col(c) = v.col(order[c]);
  }
  return out;
}

inline std::vector<double> eigenvalues(const HermitianMatrix& h) { return jacobi_eigen(h).values; }

inline double spectrum_scale(const LambdaSpec& spec) {
  double s = 1;
  for (const auto& v : spec.values()) s = std::max(s, std::abs(v.to_double()));
  return s;
}

/// gc[k-1][i-1] = i-th largest eigenvalue of the leading k x k block.
inline std::vector<std::vector<double>> gc_table(const HermitianMatrix& x) {
  std::vector<std::vector<double>> out;
  for (int k = 1; k <= x.size(); ++k) out.push_back(eigenvalues(x.leading(k)));
  return out;
}

/// u_{i,j} = i-th largest eigenvalue of x^(i+j-1).
inline GCPoint gc_map(const HermitianMatrix& x, const LambdaSpec& spec, double tol = 1e-8) {
  if (x.size() != spec.n()) throw SpectrumError("matrix size differs from n");
  auto table = gc_table(x);
  const double scale = spectrum_scale(spec);
  for (int i = 1; i <= spec.n(); ++i) {
    double err = std::abs(table.back()[i - 1] - spec.value(i).to_double());
    if (err > tol * scale)
      throw SpectrumError("eigenvalue " + std::to_string(i) + " is " + std::to_string(table.back()[i - 1]) +
                          ", expected " + spec.value(i).str());
  }
  GCPoint p(spec);
  for (Cell c : nonconstant_indices(spec).nonconstant) p.set(c, Scalar(table[c.i + c.j - 2][c.i - 1]));
  return p;
}

/// a (length k+1) and b (length k), both descending.
struct InterlacingPair {
  std::vector<Scalar> a;
  std::vector<Scalar> b;
};

/// Stage k pair of a GC point: a = row k+1, b = row k.
inline InterlacingPair stage_pair(const GCPoint& p, int k) { return {p.row(k + 1), p.row(k)}; }

struct SphereGroup {
  std::vector<int> indices;  // 0-based positions in b
  double radius_sq = 0;
};

/// Structure of {z : spec(arrow(b, z, corner)) = a}; indices are 0-based.
struct FiberSolution {
  std::vector<int> zero_indices;
  std::vector<std::pair<int, double>> fixed_radii;  // (index, |z_i|^2)
  std::vector<SphereGroup> sphere_groups;
  double corner = 0;
  double residual = 0;

  /// Sphere dimensions contributed: 1 per fixed radius, 2m-1 per group of size m.
  std::vector<int> spheres() const {
    std::vector<int> out(fixed_radii.size(), 1);
    for (const auto& g : sphere_groups) out.push_back(2 * static_cast<int>(g.indices.size()) - 1);
    std::sort(out.begin(), out.end());
    return out;
  }
  int dimension() const {
    auto s = spheres();
    return std::accumulate(s.begin(), s.end(), 0);
  }
};

namespace detail {

inline double pair_scale(const InterlacingPair& p) {
  double s = 1;
  for (const auto& x : p.a) s = std::max(s, std::abs(x.to_double()));
  for (const auto& x : p.b) s = std::max(s, std::abs(x.to_double()));
  return s;
}

/// Exact when both are exact, otherwise within eps * scale.
inline bool tied(const Scalar& x, const Scalar& y, double eps) {
  if (x.is_exact() && y.is_exact()) return x == y;
  return std::abs(x.to_double() - y.to_double()) <= eps;
}

}  // namespace detail

inline void check_interlacing(const InterlacingPair& p, double eps = 1e-9) {
  if (p.a.size() != p.b.size() + 1) throw DomainError("interlacing pair needs |a| = |b| + 1");
  const double tol = eps * detail::pair_scale(p);
  for (std::size_t i = 0; i < p.b.size(); ++i) {
    if (!approx_le(p.b[i], p.a[i], tol) || !approx_le(p.a[i + 1], p.b[i], tol))
      throw DomainError("not interlacing at position " + std::to_string(i + 1) + ": a=" + p.a[i].str() + ", b=" +
                        p.b[i].str() + ", a'=" + p.a[i + 1].str());
  }
}

/// Groups equal b values; a group of size m is free exactly when m-1 of the a
/// values equal it. A free group of size 1 has a fixed |z_i|^2, a larger one
/// a sphere of radius^2 C; every other group is forced to zero. The free sums
/// solve the characteristic equation at the remaining a values.
inline FiberSolution solve_fiber_system(const InterlacingPair& p, double eps = 1e-9) {
  check_interlacing(p, eps);
  const double scale = detail::pair_scale(p);
  const double tie = eps * scale;
  const int k = static_cast<int>(p.b.size());
  FiberSolution sol;
  double sum_a = 0, sum_b = 0;
  for (const auto& x : p.a) sum_a += x.to_double();
  for (const auto& x : p.b) sum_b += x.to_double();
  sol.corner = sum_a - sum_b;

  std::vector<char> a_used(p.a.size(), 0);
  struct Live {
    std::vector<int> indices;
    double beta;
  };
  std::vector<Live> live;
  for (int s = 0; s < k;) {
    int e = s + 1;
    while (e < k && detail::tied(p.b[e], p.b[s], tie)) ++e;
    const int m = e - s;
    std::vector<int> ties;
    for (int t = s; t <= e && t <= k; ++t)
      if (detail::tied(p.a[t], p.b[s], tie)) ties.push_back(t);
    const int c = static_cast<int>(ties.size());
    if (c < m - 1) throw NumericalError("repeated b value without the matching a values");
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), s);
    if (c == m - 1) {
      for (int t : ties) a_used[t] = 1;
      live.push_back({idx, p.b[s].to_double()});
    } else {
      for (int t = 0; t < m; ++t) a_used[ties[t]] = 1;
      sol.zero_indices.insert(sol.zero_indices.end(), idx.begin(), idx.end());
    }
    s = e;
  }
  std::vector<double> rest;
  for (std::size_t t = 0; t < p.a.size(); ++t)
    if (!a_used[t]) rest.push_back(p.a[t].to_double());
  if (rest.size() != live.size() + 1) throw InconsistencyError("reduced fiber system has the wrong size");

  const int L = static_cast<int>(live.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(L);
  if (L > 0) {
    Eigen::MatrixXd m(L + 1, L);
    Eigen::VectorXd rhs(L + 1);
    for (int r = 0; r <= L; ++r) {
      const double x = rest[r];
      double all = x - sol.corner;
      for (int g = 0; g < L; ++g) all *= x - live[g].beta;
      rhs(r) = all;
      for (int g = 0; g < L; ++g) {
        double prod = 1;
        for (int h = 0; h < L; ++h)
          if (h != g) prod *= x - live[h].beta;
        m(r, g) = prod;
      }
    }
    w = m.householderQr().solve(rhs);
    const double res = (m * w - rhs).norm();
    const double mag = std::max({1.0, rhs.norm(), m.norm() * w.norm()});
    sol.residual = res / mag;
    if (sol.residual > 1e-10 * std::max(1.0, static_cast<double>(L)))
      throw NumericalError("fiber system residual " + std::to_string(sol.residual) + " exceeds tolerance");
  } else {
    sol.residual = std::abs(rest[0] - sol.corner) / scale;
    if (sol.residual > 1e-10) throw NumericalError("fiber system is inconsistent: trace mismatch");
  }
  for (int g = 0; g < L; ++g) {
    if (!(w(g) > tie * scale))
      throw NumericalError("solved radius^2 " + std::to_string(w(g)) + " is not positive for b=" +
                           std::to_string(live[g].beta));
    if (live[g].indices.size() == 1) {
      sol.fixed_radii.push_back({live[g].indices[0], w(g)});
    } else {
      sol.sphere_groups.push_back({live[g].indices, w(g)});
    }
  }
  return sol;
}

/// Arrow matrix: diagonal b, last row z, last column conj(z), corner entry.
inline HermitianMatrix arrow_matrix(const std::vector<double>& b, const std::vector<Complex>& z, double corner) {
  const int k = static_cast<int>(b.size());
  HermitianMatrix m(k + 1);
  for (int i = 0; i < k; ++i) {
    m.set(i, i, b[i]);
    m.set(k, i, z[i]);
  }
  m.set(k, k, corner);
  return m;
}

inline HermitianMatrix assemble_matrix(const InterlacingPair& p, const FiberSolution& sol,
                                       const std::vector<Complex>& z, double tol = 1e-9) {
  if (z.size() != p.b.size()) throw DomainError("need one z entry per b value");
  const double scale = detail::pair_scale(p);
  for (int i : sol.zero_indices)
    if (std::abs(z[i]) > tol * scale) throw DomainError("z_" + std::to_string(i + 1) + " must vanish");
  for (auto [i, r2] : sol.fixed_radii)
    if (std::abs(std::norm(z[i]) - r2) > tol * scale * scale)
      throw DomainError("|z_" + std::to_string(i + 1) + "|^2 must equal " + std::to_string(r2));
  for (const auto& g : sol.sphere_groups) {
    double s = 0;
    for (int i : g.indices) s += std::norm(z[i]);
    if (std::abs(s - g.radius_sq) > tol * scale * scale) throw DomainError("sphere group radius mismatch");
  }
  std::vector<double> b;
  for (const auto& x : p.b) b.push_back(x.to_double());
  return arrow_matrix(b, z, sol.corner);
}

/// Independent phases on fixed radii, uniform points on sphere groups.
template <class Rng>
std::vector<Complex> random_fiber_choice(const FiberSolution& sol, std::size_t k, Rng& rng) {
  std::vector<Complex> z(k, Complex(0, 0));
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto [i, r2] : sol.fixed_radii) z[i] = std::polar(std::sqrt(r2), angle(rng));
  for (const auto& g : sol.sphere_groups) {
    double norm2 = 0;
    do {
      norm2 = 0;
      for (int i : g.indices) {
        z[i] = Complex(gauss(rng), gauss(rng));
        norm2 += std::norm(z[i]);
      }
    } while (norm2 < 1e-300);
    const double f = std::sqrt(g.radius_sq / norm2);
    for (int i : g.indices) z[i] *= f;
  }
  return z;
}

/// Draws matrices in the fiber over one point, built stage by stage from the
/// arrow matrices conjugated by the eigenbasis of the previous stage.
class FiberSampler {
 public:
  FiberSampler(const LambdaSpec& spec, const GCPoint& point, double eps = 1e-9) : point_(point) {
    if (!contains(point, spec, eps)) throw DomainError("point is outside the GC polytope");
    for (int k = 1; k < spec.n(); ++k) {
      pairs_.push_back(stage_pair(point, k));
      solutions_.push_back(solve_fiber_system(pairs_.back(), eps));
    }
  }

  const std::vector<FiberSolution>& solutions() const { return solutions_; }

  template <class Rng>
  HermitianMatrix operator()(Rng& rng) const {
    ComplexMatrix x(1, 1);
    x(0, 0) = point_(1, 1).to_double();
    for (std::size_t s = 0; s < pairs_.size(); ++s) {
      const int k = static_cast<int>(s) + 1;
      auto z = random_fiber_choice(solutions_[s], pairs_[s].b.size(), rng);
      auto zmat = assemble_matrix(pairs_[s], solutions_[s], z);
      auto eig = jacobi_eigen(HermitianMatrix(x));
      ComplexMatrix g = ComplexMatrix::Identity(k + 1, k + 1);
      g.topLeftCorner(k, k) = eig.vectors;
      x = g * zmat.matrix() * g.adjoint();
    }
    return HermitianMatrix(x);
  }

 private:
  GCPoint point_;
  std::vector<InterlacingPair> pairs_;
  std::vector<FiberSolution> solutions_;
};

template <class Rng>
HermitianMatrix sample_fiber(const LambdaSpec& spec, const GCPoint& point, Rng& rng, double eps = 1e-9) {
  return FiberSampler(spec, point, eps)(rng);
}

inline HermitianMatrix sample_fiber(const LambdaSpec& spec, const GCPoint& point, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_fiber(spec, point, rng);
}

/// Largest deviation between the GC table of x and the point, over every cell.
inline double gc_deviation(const std::vector<std::vector<double>>& table, const GCPoint& p) {
  double dev = 0;
  for (int k = 1; k <= p.n(); ++k)
    for (int i = 1; i <= k; ++i) dev = std::max(dev, std::abs(table[k - 1][i - 1] - p(i, k + 1 - i).to_double()));
  return dev;
}

inline double gc_deviation(const HermitianMatrix& x, const GCPoint& p) { return gc_deviation(gc_table(x), p); }

struct StageCheck {
  int k = 0;
  std::vector<int> combinatorial;  // sphere dimensions from the W-block regions
  std::vector<int> analytic;       // sphere dimensions from the fiber system
  int zeros = 0;
  bool match = false;
  std::string message;
};

struct VerificationReport {
  std::string face_id;
  int face_dim = 0;
  int combinatorial_dim = 0;
  int empirical_dim = 0;
  std::vector<StageCheck> stages;
  int samples = 0;
  int samples_ok = 0;
  double max_spectrum_error = 0;
  double max_gc_error = 0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

/// Samples the fiber over an interior point of the face and compares the
/// analytic structure of every stage with the W-block classification.
inline VerificationReport verify_face(const Face& f, int n_samples, std::uint64_t seed, double tol = 1e-8) {
  const auto& spec = f.diagram().spec();
  VerificationReport rep;
  rep.face_id = f.id();
  rep.face_dim = face_dimension(f);
  auto fd = fiber_descriptor(f);
  rep.combinatorial_dim = fd.total_dim;
  GCPoint point;
  try {
    point = interior_point(f);
  } catch (const std::exception& e) {
    rep.failures.push_back(std::string("interior point: ") + e.what());
    return rep;
  }
  for (int k = 1; k < spec.n(); ++k) {
    StageCheck sc;
    sc.k = k;
    sc.combinatorial = fd.stages[k - 1].spheres();
    try {
      auto sol = solve_fiber_system(stage_pair(point, k));
      sc.analytic = sol.spheres();
      sc.zeros = static_cast<int>(sol.zero_indices.size());
      rep.empirical_dim += sol.dimension();
    } catch (const std::exception& e) {
      sc.message = e.what();
    }
    sc.match = sc.message.empty() && sc.analytic == sc.combinatorial;
    if (!sc.match) {
      auto w = w_decomposition(f, k);
      std::string regions;
      for (const auto& reg : w.regions)
        if (reg.dim() > 0) regions += (regions.empty() ? "" : " ") + factor_name(reg.dim()) + "@" + cell_name(reg.boxes.front());
      rep.failures.push_back("stage " + std::to_string(k) + ": W-block regions [" + regions +
                             "] disagree with the fiber system" + (sc.message.empty() ? "" : " (" + sc.message + ")"));
    }
    rep.stages.push_back(std::move(sc));
  }
  if (rep.empirical_dim != rep.combinatorial_dim)
    rep.failures.push_back("fiber dimension " + std::to_string(rep.empirical_dim) + " from the fiber system, " +
                           std::to_string(rep.combinatorial_dim) + " from the W-blocks");

  const double scale = spectrum_scale(spec);
  std::mt19937_64 rng(seed);
  std::optional<FiberSampler> sampler;
  try {
    sampler.emplace(spec, point);
  } catch (const std::exception& e) {
    rep.failures.push_back(std::string("sampler: ") + e.what());
    return rep;
  }
  for (int s = 0; s < n_samples; ++s) {
    ++rep.samples;
    try {
      auto x = (*sampler)(rng);
      auto table = gc_table(x);
      const auto& ev = table.back();
      double spec_err = 0;
      for (int i = 0; i < spec.n(); ++i) spec_err = std::max(spec_err, std::abs(ev[i] - spec.value(i + 1).to_double()));
      double gc_err = gc_deviation(table, point);
      rep.max_spectrum_error = std::max(rep.max_spectrum_error, spec_err / scale);
      rep.max_gc_error = std::max(rep.max_gc_error, gc_err / scale);
      if (spec_err <= tol * scale && gc_err <= tol * scale) {
        ++rep.samples_ok;
      } else {
        rep.failures.push_back("sample " + std::to_string(s) + ": spectrum error " + std::to_string(spec_err) +
                               ", GC error " + std::to_string(gc_err));
      }
    } catch (const std::exception& e) {
      rep.failures.push_back("sample " + std::to_string(s) + ": " + e.what());
    }
  }
  return rep;
}

}  // namespace gcf
