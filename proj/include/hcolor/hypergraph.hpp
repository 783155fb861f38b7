#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcolor/common.hpp"

namespace hcolor {

using Vertex = int;
using VertexSet = std::vector<Vertex>;  // sorted ascending, no duplicates

/// k-uniform weighted hypergraph over vertex ids [0, n).
///
/// Edges are stored sorted ascending in a flat array together with an
/// inverted index vertex -> incident edge ids. Duplicate edges are kept as
/// distinct entries. Effective edge weight is `raw_weight / denominator`; the
/// denominator lets reductions keep exact 1/N weights.
class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(int k, int n, std::vector<std::vector<Vertex>> edges,
             std::vector<double> raw_weights = {}, double denominator = 1.0);

  int k() const noexcept { return k_; }
  int n() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }

  std::span<const Vertex> edge(std::size_t e) const {
    return {flat_.data() + e * static_cast<std::size_t>(k_),
            static_cast<std::size_t>(k_)};
  }
  double weight(std::size_t e) const { return weights_[e] / denominator_; }
  double raw_weight(std::size_t e) const { return weights_[e]; }
  double denominator() const noexcept { return denominator_; }
  double total_weight() const;

  std::span<const std::size_t> incident(Vertex v) const {
    return incidence_.at(static_cast<std::size_t>(v));
  }
  int degree(Vertex v) const {
    return static_cast<int>(incident(v).size());
  }

  std::vector<std::vector<Vertex>> edge_list() const;
  bool operator==(const Hypergraph& other) const;

 private:
  int k_ = 2;
  int n_ = 0;
  std::vector<Vertex> flat_;
  std::vector<double> weights_;
  double denominator_ = 1.0;
  std::vector<std::vector<std::size_t>> incidence_;
};

/// Total or partial vertex coloring with palette [0, palette).
class Coloring {
 public:
  static constexpr int kUnset = -1;

  Coloring() = default;
  Coloring(int palette, int n);
  Coloring(int palette, std::vector<int> colors);

  int palette() const noexcept { return palette_; }
  int size() const noexcept { return static_cast<int>(colors_.size()); }
  int operator[](Vertex v) const { return colors_[static_cast<std::size_t>(v)]; }
  bool is_set(Vertex v) const { return (*this)[v] != kUnset; }
  bool is_total() const;
  const std::vector<int>& colors() const noexcept { return colors_; }

  void set(Vertex v, int color);
  void unset(Vertex v) { colors_.at(static_cast<std::size_t>(v)) = kUnset; }
  /// Grows the palette; existing colors stay valid.
  void extend_palette(int palette);
  int distinct_colors_used() const;

  bool operator==(const Coloring&) const = default;

 private:
  int palette_ = 2;
  std::vector<int> colors_;
};

/// Discrepancy(l) | Rainbow(chi) | Strong(chi).
struct PromiseKind {
  enum class Type { kDiscrepancy, kRainbow, kStrong };

  Type type = Type::kDiscrepancy;
  int param = 1;

  static PromiseKind discrepancy(int l) { return {Type::kDiscrepancy, l}; }
  static PromiseKind rainbow(int chi) { return {Type::kRainbow, chi}; }
  static PromiseKind strong(int chi) { return {Type::kStrong, chi}; }

  /// Palette size of a witness coloring.
  int palette() const { return type == Type::kDiscrepancy ? 2 : param; }
  /// The slack l of the matching vector relaxation for k-uniform input:
  /// Discrepancy(l) -> l, Rainbow(k-l) -> l, Strong(k+l) -> l.
  int slack(int k) const;
  /// Throws Error("invalid_promise") when the kind does not fit k.
  void validate(int k, bool require_parity = false) const;

  std::string to_string() const;
  static PromiseKind parse(std::string_view text);

  bool operator==(const PromiseKind&) const = default;
};

struct PromiseCheck {
  bool holds = true;
  std::vector<std::size_t> violations;  // failing edge ids, ascending
};

double mono_fraction(const Hypergraph& h, const Coloring& c);
int discrepancy_of(const Hypergraph& h, const Coloring& c);
PromiseCheck verify_promise(const Hypergraph& h, const Coloring& c,
                            const PromiseKind& kind);

/// Ids of edges that are fully colored and monochromatic. Works on partial
/// colorings; an empty result means the coloring is proper where defined.
std::vector<std::size_t> monochromatic_edges(const Hypergraph& h,
                                             const Coloring& c);
bool is_proper(const Hypergraph& h, const Coloring& c);

/// N(S) = {u : S + u is an edge} for a (k-1)-subset S.
VertexSet completion_neighborhood(const Hypergraph& h,
                                  std::span<const Vertex> subset);
/// All distinct (k-1)-subsets of existing edges, lexicographically sorted.
std::vector<VertexSet> edge_supported_subsets(const Hypergraph& h);

int max_degree(const Hypergraph& h);
VertexSet neighbors(const Hypergraph& h, Vertex v);
/// Union of neighbors over a vertex set, excluding the set itself.
VertexSet neighbors(const Hypergraph& h, std::span<const Vertex> vertices);
/// Keeps edges fully inside `w`; vertex ids are preserved.
Hypergraph induced(const Hypergraph& h, std::span<const Vertex> w);
Hypergraph remove_vertices(const Hypergraph& h, std::span<const Vertex> w);
/// Vertices of [0, n) that lie in no edge.
VertexSet isolated_vertices(const Hypergraph& h);
VertexSet complement(int n, std::span<const Vertex> w);

Hypergraph read_hypergraph(std::istream& in);
void write_hypergraph(std::ostream& out, const Hypergraph& h);
Hypergraph load_hypergraph(const std::string& path);
void save_hypergraph(const std::string& path, const Hypergraph& h);

/// Coloring text format: header `n palette`, then `vertex color` per line
/// (color -1 for unset).
Coloring read_coloring(std::istream& in);
void write_coloring(std::ostream& out, const Coloring& c);
Coloring load_coloring(const std::string& path);
void save_coloring(const std::string& path, const Coloring& c);

}  // namespace hcolor
