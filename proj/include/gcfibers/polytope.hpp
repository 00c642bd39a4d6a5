#pragma once

// The GC polytope Δ_λ: H-representation, the map Ψ from diagram faces to
// equality sets, an affine-dimension oracle, interior points and face location.

#include "gcfibers/errors.hpp"
#include "gcfibers/flag_core.hpp"
#include "gcfibers/ladder.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace gcf {

/// A filling of every staircase cell; constant cells carry their forced value.
class GCPoint {
 public:
  GCPoint() = default;
  explicit GCPoint(LambdaSpec spec) : spec_(std::move(spec)) {
    const int n = spec_.n();
    values_.assign(static_cast<std::size_t>((n + 1) * (n + 1)), Scalar(0));
    for (Cell c : nonconstant_indices(spec_).all)
      if (auto v = constant_value(spec_, c)) at(c) = *v;
  }

  const LambdaSpec& spec() const { return spec_; }
  int n() const { return spec_.n(); }

  Scalar& at(Cell c) { return values_[slot(c)]; }
  const Scalar& at(Cell c) const { return values_[slot(c)]; }
  const Scalar& operator()(int i, int j) const { return at({i, j}); }

  /// Assigns a non-constant coordinate; constants must match their forced value.
  void set(Cell c, const Scalar& v) {
    if (!in_staircase(spec_, c)) throw DomainError("cell " + cell_name(c) + " is outside the index set");
    if (auto k = constant_value(spec_, c)) {
      if (*k != v) throw DomainError("cell " + cell_name(c) + " is constant " + k->str() + ", got " + v.str());
      return;
    }
    at(c) = v;
  }

  /// Row k: (u_{1,k}, u_{2,k-1}, ..., u_{k,1}), the descending spectrum of x^(k).
  std::vector<Scalar> row(int k) const {
    std::vector<Scalar> out;
    for (int i = 1; i <= k; ++i) out.push_back(at({i, k + 1 - i}));
    return out;
  }

 private:
  std::size_t slot(Cell c) const {
    if (!in_staircase(spec_, c)) throw DomainError("cell " + cell_name(c) + " is outside the index set");
    return static_cast<std::size_t>(c.i * (spec_.n() + 1) + c.j);
  }

  LambdaSpec spec_;
  std::vector<Scalar> values_;
};

/// u_upper >= u_lower between two edge-adjacent staircase cells, with the
/// lattice edge separating them.
struct AdjacentPair {
  Cell upper;
  Cell lower;
  Edge edge;
};

/// All pattern inequalities between adjacent staircase cells, skipping
/// pairs of constants: u_{i,j+1} >= u_{i,j} and u_{i,j} >= u_{i+1,j}.
inline std::vector<AdjacentPair> gc_inequalities(const LambdaSpec& spec) {
  std::vector<AdjacentPair> out;
  for (Cell c : nonconstant_indices(spec).all) {
    Cell up{c.i, c.j + 1};
    Cell right{c.i + 1, c.j};
    if (in_staircase(spec, up) && !(is_constant(spec, c) && is_constant(spec, up)))
      out.push_back({up, c, {{c.i - 1, c.j}, {c.i, c.j}}});
    if (in_staircase(spec, right) && !(is_constant(spec, c) && is_constant(spec, right)))
      out.push_back({c, right, {{c.i, c.j - 1}, {c.i, c.j}}});
  }
  return out;
}

/// Inequality coeffs . u <= rhs over the non-constant coordinates.
struct HalfSpace {
  std::vector<Scalar> coeffs;
  Scalar rhs;
};

struct HRepresentation {
  std::vector<Cell> variables;
  std::vector<HalfSpace> rows;
};

inline HRepresentation h_representation(const LambdaSpec& spec) {
  HRepresentation h;
  h.variables = nonconstant_indices(spec).nonconstant;
  auto var = [&](Cell c) {
    return static_cast<std::size_t>(std::lower_bound(h.variables.begin(), h.variables.end(), c) - h.variables.begin());
  };
  for (const auto& p : gc_inequalities(spec)) {
    HalfSpace row{std::vector<Scalar>(h.variables.size(), Scalar(0)), Scalar(0)};
    if (auto c = constant_value(spec, p.lower)) {
      row.rhs = row.rhs - *c;
    } else {
      row.coeffs[var(p.lower)] = Scalar(1);
    }
    if (auto c = constant_value(spec, p.upper)) {
      row.rhs = row.rhs + *c;
    } else {
      row.coeffs[var(p.upper)] = Scalar(-1);
    }
    h.rows.push_back(std::move(row));
  }
  return h;
}

/// u_x = u_y, or u_x = value when y is absent.
struct Equality {
  Cell x;
  std::optional<Cell> y;
  Scalar value;

  std::string str() const { return cell_name(x) + "=" + (y ? cell_name(*y) : value.str()); }
};

struct EqualitySet {
  std::string face_id;
  std::vector<Equality> items;

  std::string str() const {
    std::string out;
    for (const auto& e : items) out += (out.empty() ? "" : ",") + e.str();
    return out;
  }
};

/// Ψ(γ): one equality per adjacent pair whose separating edge is not in γ.
inline EqualitySet psi(const Face& f) {
  const auto& spec = f.diagram().spec();
  EqualitySet out;
  out.face_id = f.id();
  for (const auto& p : gc_inequalities(spec)) {
    if (f.has_edge(p.edge.from, p.edge.to)) continue;
    auto cu = constant_value(spec, p.upper);
    auto cl = constant_value(spec, p.lower);
    if (cu) {
      out.items.push_back({p.lower, std::nullopt, *cu});
    } else if (cl) {
      out.items.push_back({p.upper, std::nullopt, *cl});
    } else {
      out.items.push_back({p.lower, p.upper, Scalar(0)});
    }
  }
  return out;
}

namespace detail {

/// Equivalence classes of non-constant cells under a set of equalities,
/// closed under the pattern order, with pinned values and the order DAG.
class ClassStructure {
 public:
  ClassStructure(const LambdaSpec& spec, const std::vector<Equality>& eqs) : spec_(spec) {
    cells_ = nonconstant_indices(spec).nonconstant;
    std::vector<Scalar> pin_values;
    for (Cell c : nonconstant_indices(spec).all)
      if (auto v = constant_value(spec, c)) pin_values.push_back(*v);
    for (const auto& e : eqs)
      if (!e.y) pin_values.push_back(e.value);
    std::sort(pin_values.begin(), pin_values.end());
    pin_values.erase(std::unique(pin_values.begin(), pin_values.end()), pin_values.end());
    pins_ = pin_values;

    const int nodes = static_cast<int>(cells_.size() + pins_.size());
    parent_.resize(nodes);
    std::iota(parent_.begin(), parent_.end(), 0);
    for (const auto& e : eqs) {
      int a = node_of(e.x);
      int b = e.y ? node_of(*e.y) : pin_node(e.value);
      unite(a, b);
    }

    // Order edges: adjacency inequalities plus the chain of distinct pin values.
    std::vector<std::pair<int, int>> ge;  // (upper, lower)
    for (const auto& p : gc_inequalities(spec)) ge.push_back({node_of(p.upper), node_of(p.lower)});
    for (std::size_t t = 0; t + 1 < pins_.size(); ++t)
      ge.push_back({pin_node(pins_[t + 1]), pin_node(pins_[t])});

    // Anything forced onto a cycle of >= relations is forced equal.
    for (bool changed = true; changed;) {
      changed = false;
      auto reach = closure(nodes, ge);
      for (int a = 0; a < nodes; ++a)
        for (int b = 0; b < nodes; ++b)
          if (find(a) != find(b) && reach[find(a)][find(b)] && reach[find(b)][find(a)]) {
            unite(a, b);
            changed = true;
          }
    }

    std::map<int, int> class_of_root;
    node_class_.assign(nodes, -1);
    for (int v = 0; v < nodes; ++v) {
      int r = find(v);
      auto [it, fresh] = class_of_root.emplace(r, static_cast<int>(class_of_root.size()));
      node_class_[v] = it->second;
    }
    classes_ = static_cast<int>(class_of_root.size());
    pin_.assign(classes_, std::nullopt);
    for (std::size_t t = 0; t < pins_.size(); ++t) {
      int c = node_class_[cells_.size() + t];
      if (pin_[c] && *pin_[c] != pins_[t])
        throw InvalidFace("equalities force " + pin_[c]->str() + " = " + pins_[t].str());
      pin_[c] = pins_[t];
    }
    below_.assign(classes_, {});
    for (auto [u, l] : ge) {
      int cu = node_class_[u], cl = node_class_[l];
      if (cu != cl) below_[cu].push_back(cl);
    }
    for (auto& v : below_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    reach_ = closure_classes();
  }

  int classes() const { return classes_; }
  int free_classes() const {
    return static_cast<int>(std::count_if(pin_.begin(), pin_.end(), [](const auto& p) { return !p.has_value(); }));
  }
  const std::vector<Cell>& cells() const { return cells_; }
  int class_of(Cell c) const { return node_class_[node_of(c)]; }
  const std::optional<Scalar>& pin(int cls) const { return pin_[cls]; }

  /// Canonical partition label of each non-constant cell: its pinned value, or the first cell in its class.
  std::vector<std::string> signature() const {
    std::vector<std::string> out;
    std::vector<int> first(classes_, -1);
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      int c = class_of(cells_[k]);
      if (first[c] < 0) first[c] = static_cast<int>(k);
      out.push_back(pin_[c] ? "=" + pin_[c]->str() : cell_name(cells_[first[c]]));
    }
    return out;
  }

  /// Strictly separated representative values: narrowest open interval first, midpoint each time.
  std::vector<Scalar> assign() const {
    std::vector<std::optional<Scalar>> val(pin_.begin(), pin_.end());
    for (;;) {
      int best = -1;
      Scalar best_lo, best_hi;
      for (int c = 0; c < classes_; ++c) {
        if (val[c]) continue;
        std::optional<Scalar> lo, hi;
        for (int o = 0; o < classes_; ++o) {
          if (!val[o] || o == c) continue;
          if (reach_[c][o] && (!lo || *lo < *val[o])) lo = val[o];
          if (reach_[o][c] && (!hi || *val[o] < *hi)) hi = val[o];
        }
        if (!lo || !hi) throw InconsistencyError("free class without pinned bounds");
        if (!(*lo < *hi)) throw InvalidFace("equalities leave no room: " + lo->str() + " >= " + hi->str());
        if (best < 0 || (*hi - *lo) < (best_hi - best_lo)) {
          best = c;
          best_lo = *lo;
          best_hi = *hi;
        }
      }
      if (best < 0) break;
      val[best] = (best_lo + best_hi) / Scalar(2);
    }
    std::vector<Scalar> out;
    for (auto& v : val) out.push_back(*v);
    return out;
  }

 private:
  int node_of(Cell c) const {
    if (auto v = constant_value(spec_, c)) return pin_node(*v);
    auto it = std::lower_bound(cells_.begin(), cells_.end(), c);
    if (it == cells_.end() || *it != c) throw InvalidFace("cell " + cell_name(c) + " is outside the index set");
    return static_cast<int>(it - cells_.begin());
  }
  int pin_node(const Scalar& v) const {
    auto it = std::lower_bound(pins_.begin(), pins_.end(), v);
    return static_cast<int>(cells_.size() + (it - pins_.begin()));
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

  std::vector<std::vector<char>> closure(int nodes, const std::vector<std::pair<int, int>>& ge) {
    std::vector<std::vector<char>> r(nodes, std::vector<char>(nodes, 0));
    for (int v = 0; v < nodes; ++v) r[find(v)][find(v)] = 1;
    for (auto [u, l] : ge) r[find(u)][find(l)] = 1;
    for (int m = 0; m < nodes; ++m)
      if (find(m) == m)
        for (int a = 0; a < nodes; ++a)
          if (r[a][m])
            for (int b = 0; b < nodes; ++b)
              if (r[m][b]) r[a][b] = 1;
    return r;
  }

  /// reach[a][b]: class a >= class b is implied.
  std::vector<std::vector<char>> closure_classes() const {
    std::vector<std::vector<char>> r(classes_, std::vector<char>(classes_, 0));
    for (int c = 0; c < classes_; ++c) {
      r[c][c] = 1;
      for (int l : below_[c]) r[c][l] = 1;
    }
    for (int m = 0; m < classes_; ++m)
      for (int a = 0; a < classes_; ++a)
        if (r[a][m])
          for (int b = 0; b < classes_; ++b)
            if (r[m][b]) r[a][b] = 1;
    return r;
  }

  LambdaSpec spec_;
  std::vector<Cell> cells_;
  std::vector<Scalar> pins_;
  std::vector<int> parent_;
  std::vector<int> node_class_;
  int classes_ = 0;
  std::vector<std::optional<Scalar>> pin_;
  std::vector<std::vector<int>> below_;
  std::vector<std::vector<char>> reach_;
};

}  // namespace detail

/// Affine dimension of the polytope face cut out by the equalities.
inline int face_affine_dimension(const EqualitySet& eqs, const LambdaSpec& spec) {
  detail::ClassStructure cs(spec, eqs.items);
  (void)cs.assign();
  return cs.free_classes();
}

inline GCPoint point_from_classes(const LambdaSpec& spec, const detail::ClassStructure& cs) {
  auto vals = cs.assign();
  GCPoint p(spec);
  for (Cell c : cs.cells()) p.set(c, vals[cs.class_of(c)]);
  return p;
}

/// A point in the relative interior of Ψ(γ).
inline GCPoint interior_point(const Face& f) {
  const auto& spec = f.diagram().spec();
  return point_from_classes(spec, detail::ClassStructure(spec, psi(f).items));
}

inline GCPoint interior_point(const Face& f, const LambdaSpec& spec) {
  if (!(spec == f.diagram().spec())) throw DomainError("face belongs to a different spectrum");
  return interior_point(f);
}

inline bool approx_le(const Scalar& lo, const Scalar& hi, double tol) {
  if (lo.is_exact() && hi.is_exact()) return lo <= hi;
  return lo.to_double() <= hi.to_double() + tol;
}

inline bool approx_eq(const Scalar& x, const Scalar& y, double tol) {
  if (x.is_exact() && y.is_exact()) return x == y;
  return std::abs(x.to_double() - y.to_double()) <= tol;
}

inline bool contains(const GCPoint& p, const LambdaSpec& spec, double tol = 1e-9) {
  if (!(p.spec() == spec)) return false;
  for (Cell c : nonconstant_indices(spec).all)
    if (auto v = constant_value(spec, c); v && !approx_eq(p.at(c), *v, tol)) return false;
  for (const auto& ineq : gc_inequalities(spec))
    if (!approx_le(p.at(ineq.lower), p.at(ineq.upper), tol)) return false;
  return true;
}

/// Largest sub-diagram whose edges separate cells of different classes, pruned to positive paths.
inline Face face_from_classes(const DiagramPtr& d, const detail::ClassStructure& cs) {
  const auto& spec = d->spec();
  auto cls = [&](Cell c) { return cs.class_of(c); };
  EdgeMask m = d->empty_mask();
  for (std::size_t e = 0; e < d->edges().size(); ++e) {
    const Edge& ed = d->edges()[e];
    Cell x, y;
    if (ed.horizontal()) {
      if (ed.from.b == 0) {
        m.set(e);
        continue;
      }
      x = {ed.to.a, ed.to.b};
      y = {ed.to.a, ed.to.b + 1};
    } else {
      if (ed.from.a == 0) {
        m.set(e);
        continue;
      }
      x = {ed.to.a, ed.to.b};
      y = {ed.to.a + 1, ed.to.b};
    }
    if (!in_staircase(spec, x) || !in_staircase(spec, y) || cls(x) != cls(y)) m.set(e);
  }
  m = prune_to_positive_paths(*d, m);
  if (!is_face(*d, m)) throw InvalidFace("equalities do not leave a positive path to every top vertex");
  Face f(d, m);
  detail::ClassStructure back(spec, psi(f).items);
  if (back.signature() != cs.signature())
    throw InvalidFace("equalities do not cut out a face of the polytope (closest face: " + psi(f).str() + ")");
  return f;
}

/// The unique face whose equalities are the tight constraints at p.
inline Face locate_face(const GCPoint& p, const DiagramPtr& d, double tol = 1e-9) {
  const auto& spec = d->spec();
  if (!contains(p, spec, tol)) throw DomainError("point is outside the GC polytope");
  std::vector<Equality> tight;
  for (const auto& ineq : gc_inequalities(spec)) {
    if (!approx_eq(p.at(ineq.lower), p.at(ineq.upper), tol)) continue;
    auto cu = constant_value(spec, ineq.upper);
    auto cl = constant_value(spec, ineq.lower);
    if (cu) {
      tight.push_back({ineq.lower, std::nullopt, *cu});
    } else if (cl) {
      tight.push_back({ineq.upper, std::nullopt, *cl});
    } else {
      tight.push_back({ineq.lower, ineq.upper, Scalar(0)});
    }
  }
  detail::ClassStructure cs(spec, tight);
  return face_from_classes(d, cs);
}

/// Parses "u11=u12,u13=4" (cells may also be written u[i][j]).
inline std::vector<Equality> parse_equalities(std::string_view text, const LambdaSpec& spec) {
  auto parse_cell = [&](std::string_view s) -> std::optional<Cell> {
    auto trim = [](std::string_view t) {
      while (!t.empty() && t.front() == ' ') t.remove_prefix(1);
      while (!t.empty() && t.back() == ' ') t.remove_suffix(1);
      return t;
    };
    s = trim(s);
    if (s.size() < 2 || s[0] != 'u') return std::nullopt;
    s.remove_prefix(1);
    Cell c;
    if (s.front() == '[') {
      auto close1 = s.find(']');
      if (close1 == std::string_view::npos || close1 + 1 >= s.size() || s[close1 + 1] != '[' || s.back() != ']')
        return std::nullopt;
      try {
        c.i = std::stoi(std::string(s.substr(1, close1 - 1)));
        c.j = std::stoi(std::string(s.substr(close1 + 2, s.size() - close1 - 3)));
      } catch (const std::exception&) {
        return std::nullopt;
      }
    } else {
      if (s.size() != 2 || !std::isdigit(static_cast<unsigned char>(s[0])) ||
          !std::isdigit(static_cast<unsigned char>(s[1])))
        return std::nullopt;
      c = {s[0] - '0', s[1] - '0'};
    }
    if (!in_staircase(spec, c)) throw InvalidFace("cell u[" + std::to_string(c.i) + "][" + std::to_string(c.j) + "] is outside the index set");
    return c;
  };
  std::vector<Equality> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    start = comma == std::string_view::npos ? text.size() : comma + 1;
    if (item.find_first_not_of(' ') == std::string_view::npos) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidFace("expected 'lhs=rhs' in '" + std::string(item) + "'");
    auto lhs = parse_cell(item.substr(0, eq));
    auto rhs_text = item.substr(eq + 1);
    auto rhs = parse_cell(rhs_text);
    if (!lhs) {
      if (!rhs) throw InvalidFace("no cell in '" + std::string(item) + "'");
      std::swap(lhs, rhs);
      rhs_text = item.substr(0, eq);
    }
    if (rhs) {
      out.push_back({*lhs, rhs, Scalar(0)});
    } else {
      Scalar v;
      try {
        v = Scalar::parse(rhs_text);
      } catch (const std::invalid_argument& e) {
        throw InvalidFace(std::string("bad value in '") + std::string(item) + "': " + e.what());
      }
      out.push_back({*lhs, std::nullopt, v});
    }
  }
  return out;
}

/// Resolves a face from explicit equalities, closing them under the pattern order.
inline Face face_by_equalities(const DiagramPtr& d, const std::vector<Equality>& eqs) {
  detail::ClassStructure cs(d->spec(), eqs);
  (void)cs.assign();
  return face_from_classes(d, cs);
}

inline Face face_by_equalities(const DiagramPtr& d, std::string_view text) {
  return face_by_equalities(d, parse_equalities(text, d->spec()));
}

}  // namespace gcf
