#pragma once

// Spectrum λ of a co-adjoint U(n)-orbit, its multiplicity blocks, and the
// staircase of GC coordinates u_{i,j} (i + j <= n + 1).

#include "gcfibers/errors.hpp"
#include "gcfibers/scalar.hpp"

#include <algorithm>
#include <compare>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace gcf {

/// Index (i, j) of a GC coordinate; also the top-right corner of the unit box
/// that holds it in the ladder diagram.
struct Cell {
  int i = 0;
  int j = 0;
  auto operator<=>(const Cell&) const = default;
};

inline std::string cell_name(Cell c) { return "u" + std::to_string(c.i) + std::to_string(c.j); }

class LambdaSpec {
 public:
  LambdaSpec() = default;

  /// Validates ordering and extracts the block structure.
  explicit LambdaSpec(std::vector<Scalar> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("lambda must be non-empty");
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
      if (values_[i] < values_[i + 1]) {
        throw DomainError("lambda must be non-increasing: entry " + std::to_string(i + 1) + " (" +
                          values_[i].str() + ") < entry " + std::to_string(i + 2) + " (" + values_[i + 1].str() + ")");
      }
      if (values_[i] != values_[i + 1]) breakpoints_.push_back(static_cast<int>(i) + 1);
    }
    int prev = 0;
    for (int b : breakpoints_) {
      multiplicities_.push_back(b - prev);
      prev = b;
    }
    multiplicities_.push_back(n() - prev);
    block_of_.assign(values_.size() + 1, 0);
    int block = 0;
    for (int pos = 1; pos <= n(); ++pos) {
      if (block < static_cast<int>(breakpoints_.size()) && pos > breakpoints_[block]) ++block;
      block_of_[pos] = block;
    }
  }

  int n() const { return static_cast<int>(values_.size()); }
  /// Number of strict drops.
  int r() const { return static_cast<int>(breakpoints_.size()); }
  const std::vector<Scalar>& values() const { return values_; }
  /// λ_pos with 1-based pos.
  const Scalar& value(int pos) const { return values_.at(pos - 1); }
  /// n_1 < ... < n_r.
  const std::vector<int>& breakpoints() const { return breakpoints_; }
  /// k_1, ..., k_{r+1}.
  const std::vector<int>& multiplicities() const { return multiplicities_; }
  /// 0-based multiplicity block containing 1-based position pos.
  int block_of(int pos) const { return block_of_.at(pos); }
  /// n_0 = 0, n_1, ..., n_r, n_{r+1} = n.
  std::vector<int> partial_sums() const {
    std::vector<int> out{0};
    out.insert(out.end(), breakpoints_.begin(), breakpoints_.end());
    out.push_back(n());
    return out;
  }

  bool all_exact() const {
    return std::all_of(values_.begin(), values_.end(), [](const Scalar& s) { return s.is_exact(); });
  }

  bool operator==(const LambdaSpec& other) const { return values_ == other.values_; }

  std::string str() const {
    std::ostringstream os;
    for (int i = 0; i < n(); ++i) os << (i ? "," : "") << values_[i];
    return os.str();
  }

 private:
  std::vector<Scalar> values_;
  std::vector<int> breakpoints_;
  std::vector<int> multiplicities_;
  std::vector<int> block_of_;
};

inline LambdaSpec parse_lambda(std::span<const Scalar> values) {
  return LambdaSpec(std::vector<Scalar>(values.begin(), values.end()));
}

/// Comma-separated text form accepted on the command line: "3,2,1,0", "7/2,1,-1".
inline LambdaSpec parse_lambda(std::string_view text) {
  std::vector<Scalar> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (token.find_first_not_of(" \t") == std::string_view::npos) {
      if (comma == std::string_view::npos && values.empty()) break;
      throw DomainError("empty entry in lambda list '" + std::string(text) + "'");
    }
    try {
      values.push_back(Scalar::parse(token));
    } catch (const std::invalid_argument& e) {
      throw DomainError(std::string("bad lambda entry: ") + e.what());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return LambdaSpec(std::move(values));
}

/// dim_C of the orbit: (n^2 - sum k_i^2) / 2.
inline int complex_dimension(const LambdaSpec& spec) {
  int sq = 0;
  for (int k : spec.multiplicities()) sq += k * k;
  return (spec.n() * spec.n() - sq) / 2;
}

/// True when the coordinate u_{i,j} lies in the staircase i + j <= n + 1.
inline bool in_staircase(const LambdaSpec& spec, Cell c) { return c.i >= 1 && c.j >= 1 && c.i + c.j <= spec.n() + 1; }

/// u_{i,j} is constant on the orbit exactly when positions i and n+1-j sit in
/// the same multiplicity block; the constant is then λ_i.
inline std::optional<Scalar> constant_value(const LambdaSpec& spec, Cell c) {
  if (!in_staircase(spec, c)) return std::nullopt;
  if (spec.block_of(c.i) == spec.block_of(spec.n() + 1 - c.j)) return spec.value(c.i);
  return std::nullopt;
}

inline bool is_constant(const LambdaSpec& spec, Cell c) { return constant_value(spec, c).has_value(); }

struct IndexSet {
  std::vector<Cell> all;          // every (i, j) with i + j <= n + 1
  std::vector<Cell> nonconstant;  // the coordinates of the integrable system
};

inline IndexSet nonconstant_indices(const LambdaSpec& spec) {
  IndexSet out;
  const int n = spec.n();
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; i + j <= n + 1; ++j) {
      out.all.push_back({i, j});
      if (!is_constant(spec, {i, j})) out.nonconstant.push_back({i, j});
    }
  }
  return out;
}

/// The spectrum whose KKS form is monotone, shifted by m:
/// block i carries n - n_{i-1} - n_i, then m is added everywhere.
inline LambdaSpec monotone_lambda(std::span<const int> breakpoints, int n, const Scalar& shift) {
  int prev = 0;
  for (int b : breakpoints) {
    if (b <= prev || b >= n) throw DomainError("breakpoints must be strictly increasing in (0, n)");
    prev = b;
  }
  std::vector<int> sums{0};
  sums.insert(sums.end(), breakpoints.begin(), breakpoints.end());
  sums.push_back(n);
  std::vector<Scalar> values;
  for (std::size_t blk = 1; blk < sums.size(); ++blk) {
    Scalar v = Scalar(n - sums[blk - 1] - sums[blk]) + shift;
    for (int t = sums[blk - 1]; t < sums[blk]; ++t) values.push_back(v);
  }
  return LambdaSpec(std::move(values));
}

}  // namespace gcf
