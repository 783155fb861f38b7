#include "hcolor/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hcolor {

namespace {

void require_total(const Coloring& c, const Hypergraph& h) {
  if (c.size() != h.n()) {
    throw Error("size_mismatch", "coloring covers " + std::to_string(c.size()) +
                                     " vertices, hypergraph has " +
                                     std::to_string(h.n()));
  }
  if (!c.is_total()) throw Error("incomplete_coloring", "incomplete coloring");
}

void require_edges(const Hypergraph& h) {
  if (h.empty()) throw Error("empty_instance", "empty instance");
}

bool is_sorted_unique(std::span<const Vertex> s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i - 1] >= s[i]) return false;
  return true;
}

// Strips a trailing comment and reports whether anything is left.
bool content_line(std::string& line) {
  if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
  return line.find_first_not_of(" \t\r") != std::string::npos;
}

std::string format_weight(double w) {
  if (std::floor(w) == w && std::fabs(w) < 9007199254740992.0) {
    return std::to_string(static_cast<long long>(w));
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Hypergraph

Hypergraph::Hypergraph(int k, int n, std::vector<std::vector<Vertex>> edges,
                       std::vector<double> raw_weights, double denominator)
    : k_(k), n_(n), denominator_(denominator) {
  if (k < 1) throw Error("invalid_hypergraph", "uniformity must be >= 1");
  if (n < 0) throw Error("invalid_hypergraph", "negative vertex count");
  if (!(denominator > 0)) {
    throw Error("invalid_hypergraph", "weight denominator must be positive");
  }
  if (raw_weights.empty()) raw_weights.assign(edges.size(), 1.0);
  if (raw_weights.size() != edges.size()) {
    throw Error("invalid_hypergraph", "weight count does not match edge count");
  }
  flat_.reserve(edges.size() * static_cast<std::size_t>(k));
  incidence_.assign(static_cast<std::size_t>(n), {});
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto& edge = edges[e];
    if (static_cast<int>(edge.size()) != k) {
      throw Error("invalid_hypergraph", "edge " + std::to_string(e) + " has " +
                                            std::to_string(edge.size()) +
                                            " vertices, expected " +
                                            std::to_string(k));
    }
    std::sort(edge.begin(), edge.end());
    for (std::size_t i = 0; i < edge.size(); ++i) {
      if (edge[i] < 0 || edge[i] >= n) {
        throw Error("vertex_out_of_range",
                    "vertex id " + std::to_string(edge[i]) + " out of range");
      }
      if (i > 0 && edge[i] == edge[i - 1]) {
        throw Error("invalid_hypergraph",
                    "edge " + std::to_string(e) + " repeats a vertex");
      }
    }
    if (!(raw_weights[e] >= 0)) {
      throw Error("invalid_hypergraph", "negative edge weight");
    }
    for (Vertex v : edge) {
      flat_.push_back(v);
      incidence_[static_cast<std::size_t>(v)].push_back(e);
    }
  }
  weights_ = std::move(raw_weights);
}

double Hypergraph::total_weight() const {
  double raw = 0;
  for (double w : weights_) raw += w;
  return raw / denominator_;
}

std::vector<std::vector<Vertex>> Hypergraph::edge_list() const {
  std::vector<std::vector<Vertex>> out;
  out.reserve(num_edges());
  for (std::size_t e = 0; e < num_edges(); ++e) {
    auto span = edge(e);
    out.emplace_back(span.begin(), span.end());
  }
  return out;
}

bool Hypergraph::operator==(const Hypergraph& other) const {
  return k_ == other.k_ && n_ == other.n_ && flat_ == other.flat_ &&
         weights_ == other.weights_ && denominator_ == other.denominator_;
}

// ---------------------------------------------------------------------------
// Coloring

Coloring::Coloring(int palette, int n)
    : palette_(palette), colors_(static_cast<std::size_t>(n), kUnset) {
  if (palette < 1) throw Error("invalid_coloring", "palette must be >= 1");
}

Coloring::Coloring(int palette, std::vector<int> colors)
    : palette_(palette), colors_(std::move(colors)) {
  if (palette < 1) throw Error("invalid_coloring", "palette must be >= 1");
  for (int c : colors_) {
    if (c != kUnset && (c < 0 || c >= palette)) {
      throw Error("invalid_coloring",
                  "color " + std::to_string(c) + " outside palette");
    }
  }
}

bool Coloring::is_total() const {
  return std::none_of(colors_.begin(), colors_.end(),
                      [](int c) { return c == kUnset; });
}

void Coloring::set(Vertex v, int color) {
  if (color < 0 || color >= palette_) {
    throw Error("invalid_coloring",
                "color " + std::to_string(color) + " outside palette");
  }
  colors_.at(static_cast<std::size_t>(v)) = color;
}

void Coloring::extend_palette(int palette) {
  palette_ = std::max(palette_, palette);
}

int Coloring::distinct_colors_used() const {
  std::vector<char> seen(static_cast<std::size_t>(palette_), 0);
  int count = 0;
  for (int c : colors_) {
    if (c != kUnset && !seen[static_cast<std::size_t>(c)]) {
      seen[static_cast<std::size_t>(c)] = 1;
      ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// PromiseKind

int PromiseKind::slack(int k) const {
  switch (type) {
    case Type::kDiscrepancy: return param;
    case Type::kRainbow: return k - param;
    case Type::kStrong: return param - k;
  }
  return 0;
}

void PromiseKind::validate(int k, bool require_parity) const {
  switch (type) {
    case Type::kDiscrepancy:
      if (param < 0 || param > k) {
        throw Error("invalid_promise", "discrepancy must lie in [0, k]");
      }
      if (require_parity && (k - param) % 2 != 0) {
        throw Error("invalid_promise",
                    "discrepancy " + std::to_string(param) +
                        " needs the parity of k = " + std::to_string(k));
      }
      break;
    case Type::kRainbow:
      if (param < 2 || param > k) {
        throw Error("invalid_promise", "rainbow palette must lie in [2, k]");
      }
      break;
    case Type::kStrong:
      if (param < k || param < 2) {
        throw Error("invalid_promise", "strong palette must be >= k");
      }
      break;
  }
}

std::string PromiseKind::to_string() const {
  switch (type) {
    case Type::kDiscrepancy: return "discrepancy:" + std::to_string(param);
    case Type::kRainbow: return "rainbow:" + std::to_string(param);
    case Type::kStrong: return "strong:" + std::to_string(param);
  }
  return {};
}

PromiseKind PromiseKind::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error("invalid_promise",
                "promise must look like discrepancy:L, rainbow:C or strong:C");
  }
  std::string name(text.substr(0, colon));
  int value = 0;
  try {
    std::size_t used = 0;
    std::string num(text.substr(colon + 1));
    value = std::stoi(num, &used);
    if (used != num.size()) throw std::invalid_argument(num);
  } catch (const std::exception&) {
    throw Error("invalid_promise", "bad promise parameter in '" +
                                       std::string(text) + "'");
  }
  if (name == "discrepancy" || name == "disc") return discrepancy(value);
  if (name == "rainbow") return rainbow(value);
  if (name == "strong") return strong(value);
  throw Error("invalid_promise", "unknown promise '" + name + "'");
}

// ---------------------------------------------------------------------------
// Metrics and verifiers

double mono_fraction(const Hypergraph& h, const Coloring& c) {
  require_total(c, h);
  require_edges(h);
  double mono = 0, total = 0;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto edge = h.edge(e);
    int first = c[edge[0]];
    bool same = std::all_of(edge.begin(), edge.end(),
                            [&](Vertex v) { return c[v] == first; });
    total += h.raw_weight(e);
    if (same) mono += h.raw_weight(e);
  }
  if (!(total > 0)) throw Error("empty_instance", "empty instance");
  return mono / total;
}

int discrepancy_of(const Hypergraph& h, const Coloring& c) {
  require_total(c, h);
  if (c.palette() != 2) {
    throw Error("palette_mismatch", "discrepancy needs a 2-coloring");
  }
  int worst = 0;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    int balance = 0;
    for (Vertex v : h.edge(e)) balance += c[v] == 0 ? 1 : -1;
    worst = std::max(worst, std::abs(balance));
  }
  return worst;
}

PromiseCheck verify_promise(const Hypergraph& h, const Coloring& c,
                            const PromiseKind& kind) {
  require_total(c, h);
  if (c.palette() != kind.palette()) {
    throw Error("palette_mismatch",
                "coloring palette " + std::to_string(c.palette()) +
                    " does not match " + kind.to_string());
  }
  PromiseCheck check;
  std::vector<int> count(static_cast<std::size_t>(c.palette()));
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    std::fill(count.begin(), count.end(), 0);
    for (Vertex v : h.edge(e)) ++count[static_cast<std::size_t>(c[v])];
    bool ok = true;
    switch (kind.type) {
      case PromiseKind::Type::kDiscrepancy:
        ok = std::abs(count[0] - count[1]) <= kind.param;
        break;
      case PromiseKind::Type::kRainbow:
        ok = std::all_of(count.begin(), count.end(),
                         [](int x) { return x >= 1; });
        break;
      case PromiseKind::Type::kStrong:
        ok = std::all_of(count.begin(), count.end(),
                         [](int x) { return x <= 1; });
        break;
    }
    if (!ok) {
      check.holds = false;
      check.violations.push_back(e);
    }
  }
  return check;
}

std::vector<std::size_t> monochromatic_edges(const Hypergraph& h,
                                             const Coloring& c) {
  if (c.size() != h.n()) {
    throw Error("size_mismatch", "coloring size does not match hypergraph");
  }
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto edge = h.edge(e);
    int first = c[edge[0]];
    if (first == Coloring::kUnset) continue;
    bool same = std::all_of(edge.begin(), edge.end(),
                            [&](Vertex v) { return c[v] == first; });
    if (same) out.push_back(e);
  }
  return out;
}

bool is_proper(const Hypergraph& h, const Coloring& c) {
  return monochromatic_edges(h, c).empty();
}

// ---------------------------------------------------------------------------
// Neighborhoods and structural operations

VertexSet completion_neighborhood(const Hypergraph& h,
                                  std::span<const Vertex> subset) {
  if (static_cast<int>(subset.size()) != h.k() - 1) {
    throw Error("invalid_subset", "subset must have k-1 = " +
                                      std::to_string(h.k() - 1) + " vertices");
  }
  VertexSet s(subset.begin(), subset.end());
  std::sort(s.begin(), s.end());
  if (!is_sorted_unique(s)) throw Error("invalid_subset", "repeated vertex");
  for (Vertex v : s) {
    if (v < 0 || v >= h.n()) {
      throw Error("vertex_out_of_range", "vertex id out of range");
    }
  }
  VertexSet out;
  if (s.empty()) {
    // k = 1: every singleton edge completes the empty set.
    for (std::size_t e = 0; e < h.num_edges(); ++e) out.push_back(h.edge(e)[0]);
  } else {
    // Scan the incidence list of the member with the fewest edges.
    Vertex pivot = *std::min_element(s.begin(), s.end(), [&](Vertex a, Vertex b) {
      return h.degree(a) < h.degree(b);
    });
    for (std::size_t e : h.incident(pivot)) {
      auto edge = h.edge(e);
      if (!std::includes(edge.begin(), edge.end(), s.begin(), s.end())) continue;
      for (Vertex u : edge) {
        if (!std::binary_search(s.begin(), s.end(), u)) out.push_back(u);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<VertexSet> edge_supported_subsets(const Hypergraph& h) {
  std::vector<VertexSet> out;
  out.reserve(h.num_edges() * static_cast<std::size_t>(h.k()));
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto edge = h.edge(e);
    for (std::size_t drop = 0; drop < edge.size(); ++drop) {
      VertexSet s;
      s.reserve(edge.size() - 1);
      for (std::size_t i = 0; i < edge.size(); ++i)
        if (i != drop) s.push_back(edge[i]);
      out.push_back(std::move(s));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int max_degree(const Hypergraph& h) {
  int best = 0;
  for (Vertex v = 0; v < h.n(); ++v) best = std::max(best, h.degree(v));
  return best;
}

VertexSet neighbors(const Hypergraph& h, Vertex v) {
  if (v < 0 || v >= h.n()) {
    throw Error("vertex_out_of_range", "vertex id out of range");
  }
  VertexSet out;
  for (std::size_t e : h.incident(v))
    for (Vertex u : h.edge(e))
      if (u != v) out.push_back(u);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VertexSet neighbors(const Hypergraph& h, std::span<const Vertex> vertices) {
  std::vector<char> inside(static_cast<std::size_t>(h.n()), 0);
  for (Vertex v : vertices) {
    if (v < 0 || v >= h.n()) {
      throw Error("vertex_out_of_range", "vertex id out of range");
    }
    inside[static_cast<std::size_t>(v)] = 1;
  }
  VertexSet out;
  for (Vertex v : vertices)
    for (std::size_t e : h.incident(v))
      for (Vertex u : h.edge(e))
        if (!inside[static_cast<std::size_t>(u)]) out.push_back(u);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

Hypergraph filter_edges(const Hypergraph& h, const std::vector<char>& keep) {
  std::vector<std::vector<Vertex>> edges;
  std::vector<double> weights;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto edge = h.edge(e);
    bool inside = std::all_of(edge.begin(), edge.end(), [&](Vertex v) {
      return keep[static_cast<std::size_t>(v)] != 0;
    });
    if (!inside) continue;
    edges.emplace_back(edge.begin(), edge.end());
    weights.push_back(h.raw_weight(e));
  }
  return Hypergraph(h.k(), h.n(), std::move(edges), std::move(weights),
                    h.denominator());
}

std::vector<char> membership(const Hypergraph& h, std::span<const Vertex> w) {
  std::vector<char> mask(static_cast<std::size_t>(h.n()), 0);
  for (Vertex v : w) {
    if (v < 0 || v >= h.n()) {
      throw Error("vertex_out_of_range", "vertex id out of range");
    }
    mask[static_cast<std::size_t>(v)] = 1;
  }
  return mask;
}

}  // namespace

Hypergraph induced(const Hypergraph& h, std::span<const Vertex> w) {
  return filter_edges(h, membership(h, w));
}

Hypergraph remove_vertices(const Hypergraph& h, std::span<const Vertex> w) {
  auto mask = membership(h, w);
  for (auto& m : mask) m = !m;
  return filter_edges(h, mask);
}

VertexSet isolated_vertices(const Hypergraph& h) {
  VertexSet out;
  for (Vertex v = 0; v < h.n(); ++v)
    if (h.degree(v) == 0) out.push_back(v);
  return out;
}

VertexSet complement(int n, std::span<const Vertex> w) {
  std::vector<char> mask(static_cast<std::size_t>(n), 0);
  for (Vertex v : w) mask.at(static_cast<std::size_t>(v)) = 1;
  VertexSet out;
  for (Vertex v = 0; v < n; ++v)
    if (!mask[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Text I/O

Hypergraph read_hypergraph(std::istream& in) {
  std::string line;
  long long k = -1, n = -1, m = -1;
  while (std::getline(in, line)) {
    if (!content_line(line)) continue;
    std::istringstream header(line);
    if (!(header >> k >> n >> m) || k < 1 || n < 0 || m < 0) {
      throw Error("parse_error", "bad header line, expected `k n m`");
    }
    break;
  }
  if (k < 0) throw Error("parse_error", "missing header line");
  std::vector<std::vector<Vertex>> edges;
  std::vector<double> weights;
  edges.reserve(static_cast<std::size_t>(m));
  while (static_cast<long long>(edges.size()) < m && std::getline(in, line)) {
    if (!content_line(line)) continue;
    std::istringstream row(line);
    std::vector<Vertex> edge(static_cast<std::size_t>(k));
    for (auto& v : edge) {
      if (!(row >> v)) {
        throw Error("parse_error", "edge line " + std::to_string(edges.size()) +
                                       " has fewer than k ids");
      }
    }
    if (!std::is_sorted(edge.begin(), edge.end())) {
      throw Error("parse_error", "edge ids must be ascending");
    }
    double w = 1.0;
    if (std::string tok; row >> tok) {
      try {
        std::size_t used = 0;
        w = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error("parse_error", "bad weight '" + tok + "'");
      }
      if (row >> tok) throw Error("parse_error", "trailing tokens on edge line");
    }
    edges.push_back(std::move(edge));
    weights.push_back(w);
  }
  if (static_cast<long long>(edges.size()) != m) {
    throw Error("parse_error", "expected " + std::to_string(m) + " edges, got " +
                                   std::to_string(edges.size()));
  }
  return Hypergraph(static_cast<int>(k), static_cast<int>(n), std::move(edges),
                    std::move(weights));
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << h.k() << ' ' << h.n() << ' ' << h.num_edges() << '\n';
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto edge = h.edge(e);
    for (std::size_t i = 0; i < edge.size(); ++i) {
      if (i) out << ' ';
      out << edge[i];
    }
    if (double w = h.weight(e); w != 1.0) out << ' ' << format_weight(w);
    out << '\n';
  }
}

Hypergraph load_hypergraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path);
  return read_hypergraph(in);
}

void save_hypergraph(const std::string& path, const Hypergraph& h) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path);
  write_hypergraph(out, h);
}

Coloring read_coloring(std::istream& in) {
  std::string line;
  long long n = -1, palette = -1;
  while (std::getline(in, line)) {
    if (!content_line(line)) continue;
    std::istringstream header(line);
    if (!(header >> n >> palette) || n < 0 || palette < 1) {
      throw Error("parse_error", "bad coloring header, expected `n palette`");
    }
    break;
  }
  if (n < 0) throw Error("parse_error", "missing coloring header");
  std::vector<int> colors(static_cast<std::size_t>(n), Coloring::kUnset);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  long long rows = 0;
  while (rows < n && std::getline(in, line)) {
    if (!content_line(line)) continue;
    std::istringstream row(line);
    long long v = 0, c = 0;
    if (!(row >> v >> c) || v < 0 || v >= n) {
      throw Error("parse_error", "bad coloring line `" + line + "`");
    }
    if (seen[static_cast<std::size_t>(v)]++) {
      throw Error("parse_error", "vertex " + std::to_string(v) + " listed twice");
    }
    colors[static_cast<std::size_t>(v)] = static_cast<int>(c);
    ++rows;
  }
  if (rows != n) throw Error("parse_error", "coloring file is truncated");
  return Coloring(static_cast<int>(palette), std::move(colors));
}

void write_coloring(std::ostream& out, const Coloring& c) {
  out << c.size() << ' ' << c.palette() << '\n';
  for (Vertex v = 0; v < c.size(); ++v) out << v << ' ' << c[v] << '\n';
}

Coloring load_coloring(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path);
  return read_coloring(in);
}

void save_coloring(const std::string& path, const Coloring& c) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path);
  write_coloring(out, c);
}

}  // namespace hcolor
