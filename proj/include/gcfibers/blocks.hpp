#pragma once

// W-, M- and L-shaped blocks: per-stage fibers S_k(γ), the iterated-bundle
// descriptor, rigid L-blocks and the Lagrangian test.

#include "gcfibers/errors.hpp"
#include "gcfibers/flag_core.hpp"
#include "gcfibers/ladder.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

namespace gcf {

/// Boxes of W_k: a, b >= 1 and k+1 <= a+b <= k+2.
inline std::vector<Cell> w_block_boxes(int k) {
  std::vector<Cell> out;
  for (int s = k + 1; s <= k + 2; ++s)
    for (int a = 1; a < s; ++a) out.push_back({a, s - a});
  std::sort(out.begin(), out.end());
  return out;
}

/// M_l = W_l without (l+1, 1) and (1, l+1).
inline std::vector<Cell> m_block_boxes(int l) {
  std::vector<Cell> out;
  for (Cell c : w_block_boxes(l))
    if (c != Cell{l + 1, 1} && c != Cell{1, l + 1}) out.push_back(c);
  return out;
}

/// Translates a box set so its minimal coordinates are (1, 1), then sorts it.
inline std::vector<Cell> normalize_shape(std::vector<Cell> boxes) {
  if (boxes.empty()) return boxes;
  int mi = boxes.front().i, mj = boxes.front().j;
  for (Cell c : boxes) {
    mi = std::min(mi, c.i);
    mj = std::min(mj, c.j);
  }
  for (Cell& c : boxes) {
    c.i -= mi - 1;
    c.j -= mj - 1;
  }
  std::sort(boxes.begin(), boxes.end());
  return boxes;
}

/// l such that the box set is a translate of M_l, or 0.
inline int m_block_index(const std::vector<Cell>& boxes) {
  if (boxes.size() % 2 == 0) return 0;
  int l = static_cast<int>(boxes.size() + 1) / 2;
  return normalize_shape(boxes) == m_block_boxes(l) ? l : 0;
}

struct WRegion {
  std::vector<Cell> boxes;
  bool has_bottom_vertex = false;
  /// 0 for a point, otherwise the sphere is S^(2l-1).
  int sphere_l = 0;
  int dim() const { return sphere_l ? 2 * sphere_l - 1 : 0; }
};

struct WBlockDecomposition {
  int k = 0;
  std::vector<Cell> boxes;
  std::vector<Edge> walls;
  std::vector<WRegion> regions;
  std::vector<Vertex> bottom_vertices;
};

inline void check_stage(const LadderDiagram& d, int k) {
  if (k < 1 || k > d.n() - 1)
    throw DomainError("stage k=" + std::to_string(k) + " out of range 1.." + std::to_string(d.n() - 1));
}

/// Edge shared by two edge-adjacent boxes, as a lattice segment.
inline Edge shared_edge(Cell x, Cell y) {
  if (y < x) std::swap(x, y);
  if (x.i == y.i) return {{x.i - 1, x.j}, {x.i, x.j}};  // y is above x
  return {{x.i, x.j - 1}, {x.i, x.j}};                  // y is right of x
}

inline WBlockDecomposition w_decomposition(const Face& f, int k) {
  const auto& d = f.diagram();
  check_stage(d, k);
  WBlockDecomposition out;
  out.k = k;
  out.boxes = w_block_boxes(k);
  for (int a = 0; a <= k - 1; ++a) out.bottom_vertices.push_back({a, k - 1 - a});

  std::vector<int> parent(out.boxes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto idx = [&](Cell c) {
    auto it = std::lower_bound(out.boxes.begin(), out.boxes.end(), c);
    return (it != out.boxes.end() && *it == c) ? static_cast<int>(it - out.boxes.begin()) : -1;
  };
  for (std::size_t x = 0; x < out.boxes.size(); ++x) {
    Cell c = out.boxes[x];
    if (c.i + c.j != k + 1) continue;
    for (Cell nb : {Cell{c.i + 1, c.j}, Cell{c.i, c.j + 1}}) {
      int y = idx(nb);
      if (y < 0) continue;
      Edge e = shared_edge(c, nb);
      if (f.has_edge(e.from, e.to)) {
        out.walls.push_back(e);
      } else {
        parent[find(static_cast<int>(x))] = find(y);
      }
    }
  }
  std::sort(out.walls.begin(), out.walls.end());

  std::map<int, WRegion> comps;
  for (std::size_t x = 0; x < out.boxes.size(); ++x) comps[find(static_cast<int>(x))].boxes.push_back(out.boxes[x]);
  for (auto& [root, reg] : comps) {
    reg.has_bottom_vertex =
        std::any_of(reg.boxes.begin(), reg.boxes.end(), [k](Cell c) { return c.i + c.j == k + 1; });
    int l = m_block_index(reg.boxes);
    reg.sphere_l = (l > 0 && reg.has_bottom_vertex) ? l : 0;
    out.regions.push_back(std::move(reg));
  }
  std::sort(out.regions.begin(), out.regions.end(),
            [](const WRegion& x, const WRegion& y) { return x.boxes.front() < y.boxes.front(); });
  return out;
}

struct StageFiber {
  int k = 0;
  /// One entry per region: 0 for a point, otherwise the sphere dimension.
  std::vector<int> factors;
  int total_dim = 0;

  /// Non-trivial sphere dimensions in ascending order.
  std::vector<int> spheres() const {
    std::vector<int> out;
    for (int f : factors)
      if (f > 0) out.push_back(f);
    std::sort(out.begin(), out.end());
    return out;
  }
  int circles() const { return static_cast<int>(std::count(factors.begin(), factors.end(), 1)); }
};

inline StageFiber stage_fiber(const WBlockDecomposition& w) {
  StageFiber s;
  s.k = w.k;
  for (const auto& reg : w.regions) {
    s.factors.push_back(reg.dim());
    s.total_dim += reg.dim();
  }
  return s;
}

inline StageFiber stage_fiber(const Face& f, int k) { return stage_fiber(w_decomposition(f, k)); }

inline std::string factor_name(int dim) { return dim == 0 ? "pt" : "S^" + std::to_string(dim); }

namespace detail {

inline std::string product_string(const std::vector<int>& spheres) {
  std::string out;
  for (int s : spheres) out += (out.empty() ? "" : " x ") + factor_name(s);
  return out.empty() ? "pt" : out;
}

/// Top stage first: "F_m-bundle over ... over F_1"; products in a chain are parenthesized.
inline std::string chain_string(const std::vector<std::vector<int>>& stages_bottom_up) {
  std::vector<std::vector<int>> live;
  for (const auto& s : stages_bottom_up)
    if (!s.empty()) live.push_back(s);
  if (live.empty()) return "pt";
  if (live.size() == 1) return product_string(live.front());
  std::string out;
  for (std::size_t t = live.size(); t-- > 0;) {
    std::string p = product_string(live[t]);
    if (live[t].size() > 1) p = "(" + p + ")";
    out += p;
    if (t > 0) out += "-bundle over ";
  }
  return out;
}

}  // namespace detail

struct FiberDescriptor {
  std::vector<StageFiber> stages;
  int total_dim = 0;
  int circle_count = 0;
  /// Sphere dimensions per stage with the circles removed.
  std::vector<std::vector<int>> reduced_stages;
  bool is_lagrangian = false;
  std::string bundle;
  std::string y_bundle;
  int pi1_rank() const { return circle_count; }
  bool pi2_trivial() const { return true; }
};

inline FiberDescriptor fiber_descriptor(const Face& f) {
  FiberDescriptor fd;
  const auto& d = f.diagram();
  std::vector<std::vector<int>> full;
  for (int k = 1; k <= d.n() - 1; ++k) {
    auto s = stage_fiber(f, k);
    fd.total_dim += s.total_dim;
    fd.circle_count += s.circles();
    auto spheres = s.spheres();
    full.push_back(spheres);
    std::vector<int> reduced;
    for (int x : spheres)
      if (x != 1) reduced.push_back(x);
    fd.reduced_stages.push_back(std::move(reduced));
    fd.stages.push_back(std::move(s));
  }
  fd.is_lagrangian = fd.total_dim == complex_dimension(d.spec());
  fd.bundle = detail::chain_string(full);
  fd.y_bundle = detail::chain_string(fd.reduced_stages);
  return fd;
}

struct TorusFactorization {
  int r = 0;
  std::vector<std::vector<int>> y_stages;
  std::string y;
  /// "T^r x (Y)", with trivial parts dropped.
  std::string str() const {
    if (r == 0) return y;
    std::string t = "T^" + std::to_string(r);
    if (y == "pt") return t;
    bool compound = y.find(' ') != std::string::npos;
    return t + " x " + (compound ? "(" + y + ")" : y);
  }
};

inline TorusFactorization torus_factorization(const FiberDescriptor& fd) {
  return {fd.circle_count, fd.reduced_stages, fd.y_bundle};
}

struct HomotopyInvariants {
  int pi1_rank = 0;
  bool pi2_trivial = true;
};

inline HomotopyInvariants homotopy_invariants(const FiberDescriptor& fd) { return {fd.pi1_rank(), fd.pi2_trivial()}; }

struct LBlock {
  int k = 0;
  int p = 0;
  int q = 0;
  auto operator<=>(const LBlock&) const = default;
  /// (p, q+i) and (p+i, q) for 0 <= i < k.
  std::vector<Cell> boxes() const {
    std::vector<Cell> out{{p, q}};
    for (int i = 1; i < k; ++i) {
      out.push_back({p, q + i});
      out.push_back({p + i, q});
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::string str() const {
    return "L" + std::to_string(k) + "(" + std::to_string(p) + "," + std::to_string(q) + ")";
  }
};

/// L_k(p, q) with no face edge between its boxes and with its top edge and
/// rightmost edge both on the face.
inline bool is_rigid(const Face& f, const LBlock& blk) {
  const auto& d = f.diagram();
  auto boxes = blk.boxes();
  for (Cell c : boxes)
    if (!d.in_region(c)) return false;
  for (int i = 0; i + 1 < blk.k; ++i) {
    Edge up = shared_edge({blk.p, blk.q + i}, {blk.p, blk.q + i + 1});
    Edge right = shared_edge({blk.p + i, blk.q}, {blk.p + i + 1, blk.q});
    if (f.has_edge(up.from, up.to) || f.has_edge(right.from, right.to)) return false;
  }
  int top = blk.q + blk.k - 1;
  int rightmost = blk.p + blk.k - 1;
  return f.has_edge(Vertex{blk.p - 1, top}, Vertex{blk.p, top}) &&
         f.has_edge(Vertex{rightmost, blk.q - 1}, Vertex{rightmost, blk.q});
}

inline std::vector<LBlock> rigid_l_blocks(const Face& f) {
  const auto& d = f.diagram();
  std::vector<LBlock> out;
  for (Cell c : d.region_boxes()) {
    for (int k = 1; d.in_region({c.i, c.j + k - 1}) && d.in_region({c.i + k - 1, c.j}); ++k) {
      LBlock blk{k, c.i, c.j};
      if (is_rigid(f, blk)) out.push_back(blk);
    }
  }
  std::sort(out.begin(), out.end(), [](const LBlock& x, const LBlock& y) {
    return std::tie(x.p, x.q, x.k) < std::tie(y.p, y.q, y.k);
  });
  return out;
}

struct LagrangianReport {
  bool is_lagrangian = false;
  int fiber_dim = 0;
  int l_sum = 0;
  std::vector<LBlock> blocks;
};

/// Rigid-block coverage test, cross-checked against the W-block dimension count.
inline LagrangianReport lagrangian_classification(const Face& f, const FiberDescriptor& fd) {
  LagrangianReport rep;
  rep.blocks = rigid_l_blocks(f);
  rep.fiber_dim = fd.total_dim;
  std::vector<Cell> covered;
  for (const auto& b : rep.blocks) {
    rep.l_sum += 2 * b.k - 1;
    auto bx = b.boxes();
    covered.insert(covered.end(), bx.begin(), bx.end());
  }
  std::sort(covered.begin(), covered.end());
  if (std::adjacent_find(covered.begin(), covered.end()) != covered.end())
    throw InconsistencyError("face " + f.id() + ": rigid L-blocks overlap");
  if (rep.l_sum != rep.fiber_dim)
    throw InconsistencyError("face " + f.id() + ": rigid L-blocks give dimension " + std::to_string(rep.l_sum) +
                             " but the W-block stages give " + std::to_string(rep.fiber_dim));
  rep.is_lagrangian = covered == f.diagram().region_boxes();
  if (rep.is_lagrangian != fd.is_lagrangian)
    throw InconsistencyError("face " + f.id() + ": L-block coverage disagrees with the dimension count");
  return rep;
}

inline LagrangianReport lagrangian_classification(const Face& f) {
  return lagrangian_classification(f, fiber_descriptor(f));
}

}  // namespace gcf
