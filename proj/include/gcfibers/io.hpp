#pragma once

// JSON records for spectra, faces, fibers, points, matrices, H-representations
// and verification reports.

#include "gcfibers/blocks.hpp"
#include "gcfibers/flag_core.hpp"
#include "gcfibers/ladder.hpp"
#include "gcfibers/polytope.hpp"
#include "gcfibers/spectral.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace gcf {

using Json = nlohmann::ordered_json;

/// Integers as JSON numbers, other rationals as "p/q" strings, floats as numbers.
inline Json scalar_json(const Scalar& s) {
  if (s.is_integer()) return s.rational().numerator();
  if (s.is_exact()) return s.str();
  return s.to_double();
}

inline Scalar scalar_from_json(const Json& j) {
  if (j.is_number_integer()) return Scalar(j.get<std::int64_t>());
  if (j.is_number()) return Scalar(j.get<double>());
  if (j.is_string()) return Scalar::parse(j.get<std::string>());
  throw DomainError("expected a number or a \"p/q\" string, got " + j.dump());
}

inline Json lambda_json(const LambdaSpec& spec) {
  Json values = Json::array();
  for (const auto& v : spec.values()) values.push_back(scalar_json(v));
  return {{"values", values},
          {"n", spec.n()},
          {"breakpoints", spec.breakpoints()},
          {"multiplicities", spec.multiplicities()}};
}

inline LambdaSpec lambda_from_json(const Json& j) {
  std::vector<Scalar> values;
  for (const auto& v : j.at("values")) values.push_back(scalar_from_json(v));
  return LambdaSpec(std::move(values));
}

inline Json face_json(const Face& f) {
  Json edges = Json::array();
  for (const auto& e : f.edges()) edges.push_back({e.from.a, e.from.b, e.to.a, e.to.b});
  Json vs = Json::array();
  for (const auto& c : minimal_cycles(f)) vs.push_back({c.v_sigma.i, c.v_sigma.j});
  return {{"id", f.id()}, {"dim", face_dimension(f)}, {"edges", edges}, {"v_sigma", vs}};
}

inline Json l_blocks_json(const std::vector<LBlock>& blocks) {
  Json out = Json::array();
  for (const auto& b : blocks) out.push_back({{"k", b.k}, {"p", b.p}, {"q", b.q}});
  return out;
}

inline std::string compact_factor(int dim) { return dim == 0 ? "pt" : "S" + std::to_string(dim); }

inline Json fiber_json(const Face& f, const FiberDescriptor& fd, const LagrangianReport& lag) {
  Json stages = Json::array();
  for (const auto& s : fd.stages) {
    Json factors = Json::array();
    for (int x : s.factors) factors.push_back(compact_factor(x));
    stages.push_back({{"k", s.k}, {"factors", factors}, {"dim", s.total_dim}});
  }
  auto tf = torus_factorization(fd);
  auto hi = homotopy_invariants(fd);
  return {{"face_id", f.id()},
          {"stages", stages},
          {"total_dim", fd.total_dim},
          {"r", fd.circle_count},
          {"lagrangian", lag.is_lagrangian},
          {"l_blocks", l_blocks_json(lag.blocks)},
          {"bundle", fd.bundle},
          {"y", fd.y_bundle},
          {"factorization", tf.str()},
          {"pi1_rank", hi.pi1_rank},
          {"pi2_trivial", hi.pi2_trivial}};
}

inline std::string point_key(Cell c) { return "u[" + std::to_string(c.i) + "][" + std::to_string(c.j) + "]"; }

inline Json point_json(const GCPoint& p) {
  Json out = Json::object();
  for (Cell c : nonconstant_indices(p.spec()).all) out[point_key(c)] = scalar_json(p.at(c));
  return out;
}

inline GCPoint point_from_json(const Json& j, const LambdaSpec& spec) {
  GCPoint p(spec);
  for (Cell c : nonconstant_indices(spec).nonconstant) {
    auto key = point_key(c);
    if (!j.contains(key)) throw DomainError("point record lacks " + key);
    p.set(c, scalar_from_json(j.at(key)));
  }
  return p;
}

inline Json matrix_json(const HermitianMatrix& h) {
  Json rows = Json::array();
  for (int r = 0; r < h.size(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < h.size(); ++c) row.push_back({h(r, c).real(), h(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline HermitianMatrix matrix_from_json(const Json& j) {
  const int n = static_cast<int>(j.size());
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(j[r].size()) != n) throw DomainError("matrix rows must all have length " + std::to_string(n));
    for (int c = 0; c < n; ++c) m(r, c) = Complex(j[r][c][0].get<double>(), j[r][c][1].get<double>());
  }
  if (!m.isApprox(m.adjoint(), 1e-12)) throw DomainError("matrix is not Hermitian");
  return HermitianMatrix(m);
}

inline Json h_representation_json(const HRepresentation& h) {
  Json vars = Json::array();
  for (Cell c : h.variables) vars.push_back(point_key(c));
  Json rows = Json::array();
  for (const auto& row : h.rows) {
    Json coeffs = Json::array();
    for (const auto& c : row.coeffs) coeffs.push_back(scalar_json(c));
    rows.push_back({{"coeffs", coeffs}, {"rhs", scalar_json(row.rhs)}});
  }
  return {{"sense", "coeffs . u <= rhs"}, {"variables", vars}, {"inequalities", rows}};
}

inline Json verification_json(const VerificationReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages) {
    Json comb = Json::array(), ana = Json::array();
    for (int x : s.combinatorial) comb.push_back(compact_factor(x));
    for (int x : s.analytic) ana.push_back(compact_factor(x));
    stages.push_back({{"k", s.k}, {"combinatorial", comb}, {"analytic", ana}, {"zeros", s.zeros}, {"pass", s.match}});
  }
  return {{"face_id", r.face_id},
          {"dim", r.face_dim},
          {"fiber_dim", r.combinatorial_dim},
          {"empirical_dim", r.empirical_dim},
          {"stages", stages},
          {"samples", r.samples},
          {"samples_ok", r.samples_ok},
          {"max_spectrum_error", r.max_spectrum_error},
          {"max_gc_error", r.max_gc_error},
          {"failures", r.failures},
          {"pass", r.pass()}};
}

}  // namespace gcf
