#pragma once

// Worked faces used by several suites.

#include "gcfibers/gcfibers.hpp"

#include <initializer_list>
#include <vector>

namespace fixtures {

using namespace gcf;

/// Monotone staircase through the given corners, right moves before up moves.
inline std::vector<Vertex> walk(std::initializer_list<Vertex> corners) {
  std::vector<Vertex> out{*corners.begin()};
  for (auto it = corners.begin() + 1; it != corners.end(); ++it) {
    while (out.back().a < it->a) out.push_back({out.back().a + 1, out.back().b});
    while (out.back().b < it->b) out.push_back({out.back().a, out.back().b + 1});
  }
  return out;
}

/// GC point from rows 1..m, row k listed as (u[1][k], u[2][k-1], ..., u[k][1]).
inline GCPoint point_from_rows(const LambdaSpec& spec, const std::vector<std::vector<Scalar>>& rows) {
  GCPoint p(spec);
  for (int k = 1; k <= static_cast<int>(rows.size()); ++k)
    for (int i = 1; i <= k; ++i) p.set({i, k + 1 - i}, rows[k - 1][i - 1]);
  return p;
}

inline Face located(const char* lambda, const std::vector<std::vector<Scalar>>& rows) {
  auto d = build_ladder(parse_lambda(lambda));
  return locate_face(point_from_rows(d->spec(), rows), d);
}

/// Origin vertex of the SU(3)-type orbit, lambda = (3,3,0,-3,-3).
inline Face su3_origin() { return located("3,3,0,-3,-3", {{0}, {0, 0}, {0, 0, 0}, {3, 0, 0, -3}}); }

/// gamma_1 of the full flag with lambda = (5,3,1,-1,-3,-5).
inline Face gamma1() {
  Scalar h = Scalar::ratio(1, 2);
  return located("5,3,1,-1,-3,-5", {{h}, {1, 0}, {1, 1, -1}, {1, 1, 1, -3}, {4, 1, 1, -2, -4}});
}

/// gamma_2 of Gr(3,6) with lambda = (3,3,3,-3,-3,-3).
inline Face gamma2() {
  return located("3,3,3,-3,-3,-3", {{0}, {0, 0}, {1, 0, -1}, {3, 0, 0, -3}, {3, 3, 0, -3, -3}});
}

/// The worked face of Gamma(2,5;7), lambda = (2,2,1,1,1,0,0).
inline Face gamma_257() {
  auto d = build_ladder(parse_lambda("2,2,1,1,1,0,0"));
  return face_from_paths(d, {walk({{0, 0}, {3, 0}, {3, 1}, {5, 1}, {5, 2}}), walk({{0, 0}, {4, 0}, {4, 2}, {5, 2}}),
                             walk({{0, 0}, {5, 0}, {5, 2}}), walk({{0, 0}, {0, 3}, {1, 3}, {1, 5}, {2, 5}})});
}

/// Faces of the diagram with the given total fiber dimension and face dimension.
inline std::vector<Face> faces_where(const DiagramPtr& d, int face_dim, int fiber_dim) {
  std::vector<Face> out;
  for (const auto& f : enumerate_faces(d))
    if (face_dimension(f) == face_dim && fiber_descriptor(f).total_dim == fiber_dim) out.push_back(f);
  return out;
}

/// The vertex of F(3) whose fiber is S^3.
inline Face f3_v3() {
  auto d = build_ladder(parse_lambda("1,0,-1"));
  return faces_where(d, 0, 3).at(0);
}

/// The one-dimensional Lagrangian face of Gr(2,4).
inline Face gr24_gamma() {
  auto d = build_ladder(parse_lambda("1,1,0,0"));
  return faces_where(d, 1, 4).at(0);
}

}  // namespace fixtures
