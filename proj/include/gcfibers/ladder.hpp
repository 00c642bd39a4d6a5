#pragma once

// Ladder diagram Γ_λ, positive paths, faces (unions of positive paths that
// reach every top vertex), face dimension, minimal cycles and the face lattice.

#include "gcfibers/errors.hpp"
#include "gcfibers/flag_core.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace gcf {

/// Lattice point (a, b) of the diagram grid.
struct Vertex {
  int a = 0;
  int b = 0;
  auto operator<=>(const Vertex&) const = default;
};

/// Unit segment; `from` is the lower-left end, `to` is one step right or up.
struct Edge {
  Vertex from;
  Vertex to;
  auto operator<=>(const Edge&) const = default;
  bool horizontal() const { return from.b == to.b; }
};

/// Fixed-width bitset over the edges of one diagram.
class EdgeMask {
 public:
  EdgeMask() = default;
  explicit EdgeMask(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const { return bits_; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  EdgeMask& operator|=(const EdgeMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend EdgeMask operator|(EdgeMask x, const EdgeMask& y) { return x |= y; }
  friend EdgeMask operator&(EdgeMask x, const EdgeMask& y) {
    for (std::size_t i = 0; i < x.words_.size(); ++i) x.words_[i] &= y.words_[i];
    return x;
  }

  /// Every bit of *this is also set in o.
  bool subset_of(const EdgeMask& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  bool operator==(const EdgeMask&) const = default;

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto w : words_) {
      h ^= w;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < bits_; ++i)
      if (test(i)) out.push_back(static_cast<int>(i));
    return out;
  }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct EdgeMaskHash {
  std::size_t operator()(const EdgeMask& m) const { return m.hash(); }
};

class LadderDiagram {
 public:
  explicit LadderDiagram(LambdaSpec spec) : spec_(std::move(spec)) {
    const int n = spec_.n();
    width_ = n;
    height_ = n;
    auto sums = spec_.partial_sums();
    std::vector<int> column_top(n + 1, -1);
    if (spec_.r() == 0) {
      for (int a = 0; a <= n; ++a) column_top[a] = 0;
    } else {
      // The last rectangle [n_r, n] x [0, 0] only adds a dangling tail and is omitted.
      for (int j = 0; j < spec_.r(); ++j) {
        int h = n - sums[j + 1];
        for (int a = sums[j]; a <= sums[j + 1]; ++a) column_top[a] = std::max(column_top[a], h);
      }
    }
    column_top_ = column_top;
    vertex_id_.assign((width_ + 1) * (height_ + 1), -1);
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= column_top[a]; ++b) {
        vertex_id_[slot(a, b)] = static_cast<int>(vertices_.size());
        vertices_.push_back({a, b});
      }
    }
    right_.assign(vertices_.size(), -1);
    up_.assign(vertices_.size(), -1);
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      auto [a, b] = vertices_[v];
      if (has_vertex({a + 1, b})) {
        right_[v] = static_cast<int>(edges_.size());
        edges_.push_back({{a, b}, {a + 1, b}});
      }
      if (has_vertex({a, b + 1})) {
        up_[v] = static_cast<int>(edges_.size());
        edges_.push_back({{a, b}, {a, b + 1}});
      }
    }
    for (const auto& v : vertices_)
      if (v.a + v.b == n) top_vertices_.push_back(v);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (has_vertex({i, j}) && has_vertex({i - 1, j - 1}) && has_vertex({i - 1, j}) && has_vertex({i, j - 1}))
          region_boxes_.push_back({i, j});
    if (region_boxes_.size() != nonconstant_indices(spec_).nonconstant.size())
      throw InconsistencyError("ladder diagram box count differs from the number of non-constant coordinates");
  }

  const LambdaSpec& spec() const { return spec_; }
  int n() const { return spec_.n(); }
  Vertex origin() const { return {0, 0}; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& top_vertices() const { return top_vertices_; }
  /// Boxes □^(i,j) = [i-1,i] x [j-1,j] enclosed by the diagram, keyed by their top-right corner.
  const std::vector<Cell>& region_boxes() const { return region_boxes_; }

  bool has_vertex(Vertex v) const {
    return v.a >= 0 && v.b >= 0 && v.a <= width_ && v.b <= height_ && vertex_id_[slot(v.a, v.b)] >= 0;
  }
  int vertex_id(Vertex v) const { return has_vertex(v) ? vertex_id_[slot(v.a, v.b)] : -1; }
  bool is_top(Vertex v) const { return has_vertex(v) && v.a + v.b == n(); }

  /// Edge index of the unit segment p-q (either orientation), or -1.
  int edge_id(Vertex p, Vertex q) const {
    if (q < p) std::swap(p, q);
    int v = vertex_id(p);
    if (v < 0) return -1;
    if (q.a == p.a + 1 && q.b == p.b) return right_[v];
    if (q.a == p.a && q.b == p.b + 1) return up_[v];
    return -1;
  }
  int right_edge(int vertex) const { return right_[vertex]; }
  int up_edge(int vertex) const { return up_[vertex]; }

  bool in_region(Cell box) const {
    return std::binary_search(region_boxes_.begin(), region_boxes_.end(), box);
  }

  EdgeMask empty_mask() const { return EdgeMask(edges_.size()); }
  EdgeMask full_mask() const {
    EdgeMask m(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) m.set(e);
    return m;
  }

 private:
  std::size_t slot(int a, int b) const { return static_cast<std::size_t>(a * (height_ + 1) + b); }

  LambdaSpec spec_;
  int width_ = 0;
  int height_ = 0;
  std::vector<int> column_top_;
  std::vector<int> vertex_id_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<int> right_;
  std::vector<int> up_;
  std::vector<Vertex> top_vertices_;
  std::vector<Cell> region_boxes_;
};

using DiagramPtr = std::shared_ptr<const LadderDiagram>;

inline DiagramPtr build_ladder(const LambdaSpec& spec) { return std::make_shared<const LadderDiagram>(spec); }

/// A monotone lattice path from the origin to a top vertex.
struct PositivePath {
  std::vector<Vertex> vertices;
  EdgeMask edges;
};

inline std::vector<PositivePath> positive_paths(const LadderDiagram& d) {
  std::vector<PositivePath> out;
  std::vector<Vertex> trail{d.origin()};
  EdgeMask mask = d.empty_mask();
  auto dfs = [&](auto&& self, Vertex v) -> void {
    if (d.is_top(v)) {
      out.push_back({trail, mask});
      return;
    }
    for (Vertex w : {Vertex{v.a + 1, v.b}, Vertex{v.a, v.b + 1}}) {
      int e = d.edge_id(v, w);
      if (e < 0) continue;
      trail.push_back(w);
      mask.set(e);
      self(self, w);
      mask.reset(e);
      trail.pop_back();
    }
  };
  dfs(dfs, d.origin());
  return out;
}

/// Builds the edge mask of a path given by its vertex sequence.
inline EdgeMask path_mask(const LadderDiagram& d, const std::vector<Vertex>& path) {
  EdgeMask m = d.empty_mask();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    int e = d.edge_id(path[i], path[i + 1]);
    if (e < 0 || path[i + 1] < path[i])
      throw InvalidFace("path step (" + std::to_string(path[i].a) + "," + std::to_string(path[i].b) + ")->(" +
                        std::to_string(path[i + 1].a) + "," + std::to_string(path[i + 1].b) +
                        ") is not a positive unit step of the diagram");
    m.set(static_cast<std::size_t>(e));
  }
  return m;
}

class Face {
 public:
  Face() = default;
  Face(DiagramPtr diagram, EdgeMask edges) : diagram_(std::move(diagram)), edges_(std::move(edges)) {}

  const LadderDiagram& diagram() const { return *diagram_; }
  const DiagramPtr& diagram_ptr() const { return diagram_; }
  const EdgeMask& mask() const { return edges_; }
  bool has_edge(int e) const { return e >= 0 && edges_.test(static_cast<std::size_t>(e)); }
  bool has_edge(Vertex p, Vertex q) const { return has_edge(diagram_->edge_id(p, q)); }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (int e : edges_.indices()) out.push_back(diagram_->edges()[e]);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Vertex> vertices() const {
    std::vector<Vertex> out;
    for (const auto& e : edges()) {
      out.push_back(e.from);
      out.push_back(e.to);
    }
    if (out.empty()) out.push_back(diagram_->origin());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Stable content hash of the sorted edge list (FNV-1a, 64 bit, hex).
  std::string id() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](int x) {
      for (int s = 0; s < 4; ++s) {
        h ^= static_cast<std::uint64_t>((static_cast<unsigned>(x) >> (8 * s)) & 0xFFU);
        h *= 1099511628211ULL;
      }
    };
    mix(diagram_->n());
    for (const auto& e : edges()) {
      mix(e.from.a);
      mix(e.from.b);
      mix(e.to.a);
      mix(e.to.b);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  bool operator==(const Face& o) const { return edges_ == o.edges_; }

 private:
  DiagramPtr diagram_;
  EdgeMask edges_;
};

inline int face_dimension(const Face& f) {
  return static_cast<int>(f.mask().count()) - static_cast<int>(f.vertices().size()) + 1;
}

/// Every edge lies on a positive path inside the edge set, and every top vertex is reached.
inline bool is_face(const LadderDiagram& d, const EdgeMask& m) {
  const auto& vs = d.vertices();
  std::vector<char> from_origin(vs.size(), 0);
  std::vector<char> to_top(vs.size(), 0);
  // Vertices are stored sorted by (a, b), which is a topological order for right/up steps.
  from_origin.front() = 1;  // the origin sorts first
  for (std::size_t v = 0; v < vs.size(); ++v) {
    if (!from_origin[v]) continue;
    for (int e : {d.right_edge(static_cast<int>(v)), d.up_edge(static_cast<int>(v))})
      if (e >= 0 && m.test(e)) from_origin[d.vertex_id(d.edges()[e].to)] = 1;
  }
  for (std::size_t v = vs.size(); v-- > 0;) {
    if (d.is_top(vs[v])) {
      to_top[v] = 1;
      continue;
    }
    for (int e : {d.right_edge(static_cast<int>(v)), d.up_edge(static_cast<int>(v))})
      if (e >= 0 && m.test(e) && to_top[d.vertex_id(d.edges()[e].to)]) to_top[v] = 1;
  }
  for (const auto& t : d.top_vertices())
    if (!from_origin[d.vertex_id(t)]) return false;
  for (int e : m.indices()) {
    const auto& ed = d.edges()[e];
    if (!from_origin[d.vertex_id(ed.from)] || !to_top[d.vertex_id(ed.to)]) return false;
  }
  return true;
}

/// Keeps only the edges that lie on some origin-to-top monotone path within m.
inline EdgeMask prune_to_positive_paths(const LadderDiagram& d, const EdgeMask& m) {
  const auto& vs = d.vertices();
  std::vector<char> from_origin(vs.size(), 0);
  std::vector<char> to_top(vs.size(), 0);
  from_origin.front() = 1;  // the origin sorts first
  for (std::size_t v = 0; v < vs.size(); ++v) {
    if (!from_origin[v]) continue;
    for (int e : {d.right_edge(static_cast<int>(v)), d.up_edge(static_cast<int>(v))})
      if (e >= 0 && m.test(e)) from_origin[d.vertex_id(d.edges()[e].to)] = 1;
  }
  for (std::size_t v = vs.size(); v-- > 0;) {
    if (d.is_top(vs[v])) {
      to_top[v] = 1;
      continue;
    }
    for (int e : {d.right_edge(static_cast<int>(v)), d.up_edge(static_cast<int>(v))})
      if (e >= 0 && m.test(e) && to_top[d.vertex_id(d.edges()[e].to)]) to_top[v] = 1;
  }
  EdgeMask out = d.empty_mask();
  for (int e : m.indices()) {
    const auto& ed = d.edges()[e];
    if (from_origin[d.vertex_id(ed.from)] && to_top[d.vertex_id(ed.to)]) out.set(e);
  }
  return out;
}

inline Face make_face(const DiagramPtr& d, const EdgeMask& m) {
  if (!is_face(*d, m)) throw InvalidFace("edge set is not a union of positive paths covering all top vertices");
  return Face(d, m);
}

/// Face spanned by the given positive paths (vertex sequences starting at the origin).
inline Face face_from_paths(const DiagramPtr& d, const std::vector<std::vector<Vertex>>& paths) {
  EdgeMask m = d->empty_mask();
  for (const auto& p : paths) {
    if (p.empty() || p.front() != d->origin()) throw InvalidFace("positive path must start at the origin");
    if (!d->is_top(p.back())) throw InvalidFace("positive path must end at a top vertex");
    m |= path_mask(*d, p);
  }
  return make_face(d, m);
}

inline Face improper_face(const DiagramPtr& d) { return Face(d, d->full_mask()); }

/// Default bound on region boxes for exhaustive enumeration; GC_FIBERS_MAX_BOXES overrides.
inline int max_enumeration_boxes() {
  if (const char* env = std::getenv("GC_FIBERS_MAX_BOXES")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return 12;
}

inline void check_enumeration_bound(const LadderDiagram& d) {
  int boxes = static_cast<int>(d.region_boxes().size());
  int bound = max_enumeration_boxes();
  if (boxes > bound) throw SizeGuardError(boxes, bound);
}

/// Canonical order: by dimension, then by sorted edge list.
inline void sort_faces(std::vector<Face>& faces) {
  std::vector<std::pair<std::pair<int, std::vector<Edge>>, std::size_t>> keys;
  keys.reserve(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) keys.push_back({{face_dimension(faces[i]), faces[i].edges()}, i});
  std::sort(keys.begin(), keys.end());
  std::vector<Face> sorted;
  sorted.reserve(faces.size());
  for (auto& k : keys) sorted.push_back(std::move(faces[k.second]));
  faces = std::move(sorted);
}

/// All faces: unions of positive paths that cover every top vertex.
inline std::vector<Face> enumerate_faces(const DiagramPtr& d) {
  check_enumeration_bound(*d);
  auto paths = positive_paths(*d);
  std::unordered_set<EdgeMask, EdgeMaskHash> seen;
  std::vector<EdgeMask> order;
  for (const auto& p : paths)
    if (seen.insert(p.edges).second) order.push_back(p.edges);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& p : paths) {
      EdgeMask u = order[i] | p.edges;
      if (seen.insert(u).second) order.push_back(std::move(u));
    }
  }
  std::vector<Face> faces;
  for (auto& m : order)
    if (is_face(*d, m)) faces.emplace_back(d, std::move(m));
  sort_faces(faces);
  return faces;
}

/// A bounded region of the complement of a face, with its top-right vertex v_σ.
struct MinimalCycle {
  std::vector<Cell> boxes;
  std::vector<Edge> boundary;
  Cell v_sigma;
};

inline std::vector<MinimalCycle> minimal_cycles(const Face& f) {
  const auto& d = f.diagram();
  const auto& boxes = d.region_boxes();
  const int exterior = static_cast<int>(boxes.size());
  std::vector<int> parent(boxes.size() + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto index_of = [&](Cell c) {
    auto it = std::lower_bound(boxes.begin(), boxes.end(), c);
    return (it != boxes.end() && *it == c) ? static_cast<int>(it - boxes.begin()) : exterior;
  };
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    auto [i, j] = boxes[k];
    // Sides: left, right, bottom, top, each with its neighbouring box.
    const std::pair<Edge, Cell> sides[] = {
        {{{i - 1, j - 1}, {i - 1, j}}, {i - 1, j}},
        {{{i, j - 1}, {i, j}}, {i + 1, j}},
        {{{i - 1, j - 1}, {i, j - 1}}, {i, j - 1}},
        {{{i - 1, j}, {i, j}}, {i, j + 1}},
    };
    for (const auto& [edge, nb] : sides) {
      if (f.has_edge(edge.from, edge.to)) continue;
      parent[find(static_cast<int>(k))] = find(index_of(nb));
    }
  }
  std::map<int, MinimalCycle> comps;
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    int root = find(static_cast<int>(k));
    if (root == find(exterior)) continue;
    comps[root].boxes.push_back(boxes[k]);
  }
  std::vector<MinimalCycle> out;
  for (auto& [root, cyc] : comps) {
    cyc.v_sigma = *std::max_element(cyc.boxes.begin(), cyc.boxes.end(), [](Cell x, Cell y) {
      return std::pair(x.i + x.j, x.i) < std::pair(y.i + y.j, y.i);
    });
    for (const auto& e : f.edges()) {
      Cell side1, side2;
      if (e.horizontal()) {
        side1 = {e.to.a, e.to.b};
        side2 = {e.to.a, e.to.b + 1};
      } else {
        side1 = {e.to.a, e.to.b};
        side2 = {e.to.a + 1, e.to.b};
      }
      bool in1 = std::binary_search(cyc.boxes.begin(), cyc.boxes.end(), side1);
      bool in2 = std::binary_search(cyc.boxes.begin(), cyc.boxes.end(), side2);
      if (in1 != in2) cyc.boundary.push_back(e);
    }
    out.push_back(std::move(cyc));
  }
  std::sort(out.begin(), out.end(), [](const MinimalCycle& x, const MinimalCycle& y) { return x.v_sigma < y.v_sigma; });
  return out;
}

/// Containment order on a face list, with unions.
class FaceLattice {
 public:
  explicit FaceLattice(std::vector<Face> faces) : faces_(std::move(faces)) {
    for (std::size_t i = 0; i < faces_.size(); ++i) index_.emplace(faces_[i].mask(), i);
  }

  const std::vector<Face>& faces() const { return faces_; }
  bool leq(std::size_t x, std::size_t y) const { return faces_[x].mask().subset_of(faces_[y].mask()); }

  /// Index of γ_x ∪ γ_y, which is again a face.
  std::size_t join(std::size_t x, std::size_t y) const {
    auto it = index_.find(faces_[x].mask() | faces_[y].mask());
    if (it == index_.end()) throw InconsistencyError("union of two faces is missing from the face list");
    return it->second;
  }

  std::optional<std::size_t> find(const EdgeMask& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Number of faces of each dimension 0..max.
  std::vector<int> f_vector() const {
    std::vector<int> out;
    for (const auto& f : faces_) {
      int dim = face_dimension(f);
      if (static_cast<int>(out.size()) <= dim) out.resize(dim + 1, 0);
      ++out[dim];
    }
    return out;
  }

 private:
  std::vector<Face> faces_;
  std::unordered_map<EdgeMask, std::size_t, EdgeMaskHash> index_;
};

inline FaceLattice face_lattice(std::vector<Face> faces) { return FaceLattice(std::move(faces)); }

}  // namespace gcf
