#include "hcolor/mincolor.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "hcolor/rounding.hpp"

namespace hcolor {

// ---------------------------------------------------------------------------
// Random recoloring walk

TwoColorResult two_color_sets(int n, const VertexSet& vertices,
                              const std::vector<VertexSet>& sets, Rng& rng,
                              long long max_flips) {
  const auto size = static_cast<long long>(vertices.size());
  TwoColorResult out;
  out.max_flips = max_flips < 0 ? 64 * size * size * size : max_flips;
  out.coloring = Coloring(2, n);
  if (vertices.empty()) {
    out.success = true;
    return out;
  }
  std::vector<int> local(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> members;
  for (const auto& s : sets) {
    if (s.empty()) continue;
    if (std::any_of(s.begin(), s.end(), [&](Vertex v) { return local[v] < 0; })) continue;
    std::vector<int> m;
    for (Vertex v : s) m.push_back(local[v]);
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    members.push_back(std::move(m));
  }
  std::vector<std::vector<int>> incident(vertices.size());
  for (std::size_t s = 0; s < members.size(); ++s)
    for (int v : members[s]) incident[v].push_back(static_cast<int>(s));

  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<int> color(vertices.size());
  for (auto& c : color) c = coin(rng);
  std::vector<int> ones(members.size(), 0);
  std::vector<int> pos(members.size(), -1);
  std::vector<int> mono;
  auto is_mono = [&](std::size_t s) {
    return ones[s] == 0 || ones[s] == static_cast<int>(members[s].size());
  };
  auto refresh = [&](std::size_t s) {
    const bool now = is_mono(s);
    if (now && pos[s] < 0) {
      pos[s] = static_cast<int>(mono.size());
      mono.push_back(static_cast<int>(s));
    } else if (!now && pos[s] >= 0) {
      const int last = mono.back();
      mono[pos[s]] = last;
      pos[last] = pos[s];
      mono.pop_back();
      pos[s] = -1;
    }
  };
  for (std::size_t s = 0; s < members.size(); ++s) {
    for (int v : members[s]) ones[s] += color[v];
    refresh(s);
  }
  while (!mono.empty() && out.flips < out.max_flips) {
    const int s = mono[std::uniform_int_distribution<std::size_t>(0, mono.size() - 1)(rng)];
    const auto& m = members[s];
    const int v = m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng)];
    const int delta = color[v] ? -1 : 1;
    color[v] ^= 1;
    for (int t : incident[v]) {
      ones[t] += delta;
      refresh(static_cast<std::size_t>(t));
    }
    ++out.flips;
  }
  out.remaining_mono = mono.size();
  for (std::size_t i = 0; i < vertices.size(); ++i) out.coloring.set(vertices[i], color[i]);
  // Recount from scratch before claiming success.
  out.success = std::none_of(members.begin(), members.end(), [&](const std::vector<int>& m) {
    return std::all_of(m.begin(), m.end(), [&](int v) { return color[v] == color[m[0]]; });
  });
  if (!out.success) {
    for (Vertex v : vertices) out.coloring.unset(v);
  }
  return out;
}

TwoColorResult two_color_balanced(const Hypergraph& h, std::uint64_t seed,
                                  long long max_flips) {
  VertexSet all(static_cast<std::size_t>(h.n()));
  std::iota(all.begin(), all.end(), 0);
  std::vector<VertexSet> sets;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto edge = h.edge(e);
    sets.emplace_back(edge.begin(), edge.end());
  }
  Rng rng = make_rng(seed, "two_color");
  return two_color_sets(h.n(), all, sets, rng, max_flips);
}

// ---------------------------------------------------------------------------
// Bounds

double sc_color_bound(int n, int k, int t, int c) {
  return 3.0 * n * (k + 1) * std::log(static_cast<double>(k)) /
         (std::pow(static_cast<double>(t), 1.0 / (k - 1)) * c * std::log(static_cast<double>(n)));
}

double ld_color_bound(int n, int t, int c) { return 2.0 * n / (static_cast<double>(c) * t); }

double rc_color_bound(int n, int k, int t, int c) {
  return (k - 1.0) * n / (static_cast<double>(c) * t);
}

long long set_degree_bound(int n, int k, int t) {
  // C(n - 1, k - 2) * t with saturation.
  long double binom = 1;
  const int r = k - 2;
  for (int i = 0; i < r; ++i) binom = binom * (n - 1 - i) / (i + 1);
  const long double total = std::round(binom) * t;
  if (total >= static_cast<long double>(LLONG_MAX)) return LLONG_MAX;
  return static_cast<long long>(total);
}

int sc_batch_size(int n, int k, int c) {
  if (n < 2) return 1;
  return std::max(1, static_cast<int>(std::floor(c * std::log(static_cast<double>(n)) /
                                                 std::log(static_cast<double>(k)))));
}

double slack_color_scale(int n, int k, int l) {
  return std::pow(static_cast<double>(n), static_cast<double>(l) * l / k);
}

// ---------------------------------------------------------------------------
// Shared state of the degree reducers

namespace {

class ReduceState {
 public:
  explicit ReduceState(const Hypergraph& h)
      : h_(&h), color_(static_cast<std::size_t>(h.n()), Coloring::kUnset) {}

  bool uncolored(Vertex v) const { return color_[v] == Coloring::kUnset; }
  bool alive(std::size_t e) const {
    auto edge = h_->edge(e);
    return std::all_of(edge.begin(), edge.end(), [&](Vertex v) { return uncolored(v); });
  }
  int fresh() { return next_color_++; }
  int colors_used() const { return next_color_; }

  void paint(Vertex v, int color) {
    if (!uncolored(v)) throw Error("internal", "vertex colored twice");
    color_[v] = color;
  }

  /// Alive-edge degree in H[uncolored].
  int degree(Vertex v) const {
    int d = 0;
    for (std::size_t e : h_->incident(v)) d += alive(e);
    return d;
  }

  int residual_degree() const {
    int best = 0;
    for (Vertex v = 0; v < h_->n(); ++v)
      if (uncolored(v)) best = std::max(best, degree(v));
    return best;
  }

  int residual_n() const {
    return static_cast<int>(std::count(color_.begin(), color_.end(), Coloring::kUnset));
  }

  /// H edges lying inside the flagged set with every vertex uncolored.
  std::vector<VertexSet> edges_inside(const std::vector<char>& in) const {
    std::vector<VertexSet> out;
    for (Vertex v = 0; v < h_->n(); ++v) {
      if (!in[v]) continue;
      for (std::size_t e : h_->incident(v)) {
        auto edge = h_->edge(e);
        if (edge[0] != v || !alive(e)) continue;
        if (std::all_of(edge.begin(), edge.end(), [&](Vertex u) { return in[u] != 0; }))
          out.emplace_back(edge.begin(), edge.end());
      }
    }
    return out;
  }

  bool has_edge_inside(const VertexSet& set) const {
    std::vector<char> in(static_cast<std::size_t>(h_->n()), 0);
    for (Vertex v : set) in[v] = 1;
    for (Vertex v : set) {
      for (std::size_t e : h_->incident(v)) {
        auto edge = h_->edge(e);
        if (edge[0] != v || !alive(e)) continue;
        if (std::all_of(edge.begin(), edge.end(), [&](Vertex u) { return in[u] != 0; }))
          return true;
      }
    }
    return false;
  }

  void push_phase(PhaseRecord rec, int colors_before, int colored) {
    rec.colors = next_color_ - colors_before;
    rec.colored = colored;
    rec.residual_n = residual_n();
    rec.residual_degree = residual_degree();
    phases_.push_back(rec);
  }

  PartialColoringResult finish() {
    PartialColoringResult out;
    out.coloring = Coloring(std::max(1, next_color_), color_);
    for (Vertex v = 0; v < h_->n(); ++v)
      if (uncolored(v)) out.uncolored.push_back(v);
    out.residual = induced(*h_, out.uncolored);
    out.colors_used = next_color_;
    out.phases = std::move(phases_);
    if (!is_proper(*h_, out.coloring)) {
      throw Error("internal", "degree reduction produced a monochromatic edge");
    }
    return out;
  }

 private:
  const Hypergraph* h_;
  std::vector<int> color_;
  int next_color_ = 0;
  std::vector<PhaseRecord> phases_;
};

// Maps local colors of a successful assignment onto fresh global colors,
// allocating only the colors that are used.
class FreshPalette {
 public:
  explicit FreshPalette(ReduceState& st) : st_(st) {}
  int operator()(int local) {
    auto [it, inserted] = map_.try_emplace(local, 0);
    if (inserted) it->second = st_.fresh();
    return it->second;
  }

 private:
  ReduceState& st_;
  std::map<int, int> map_;
};

VertexSet union_of(const std::vector<VertexSet>& sets) {
  VertexSet out;
  for (const auto& s : sets) out.insert(out.end(), s.begin(), s.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Odometer over [0, q)^size; returns false after the last assignment.
bool next_assignment(std::vector<int>& a, int q) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (++a[i] < q) return true;
    a[i] = 0;
  }
  return false;
}

bool next_combination(std::vector<int>& idx, int n) {
  const int r = static_cast<int>(idx.size());
  for (int i = r - 1; i >= 0; --i) {
    if (idx[i] < n - r + i) {
      ++idx[i];
      for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

long long walk_budget(std::size_t size, const ReduceParams& params) {
  const auto n = static_cast<long long>(size);
  return std::min(64 * n * n * n, params.walk_flip_cap);
}

bool monochromatic(const VertexSet& set, const std::vector<int>& color) {
  return std::all_of(set.begin(), set.end(), [&](Vertex v) { return color[v] == color[set[0]]; });
}

}  // namespace

// ---------------------------------------------------------------------------
// Strong colorability

PartialColoringResult sc_degree_reduce(const Hypergraph& h, const ReduceParams& params) {
  const int k = h.k();
  if (k < 2) throw Error("invalid_parameters", "need k >= 2");
  if (params.t < 1 || params.c < 1) throw Error("invalid_parameters", "need t >= 1 and c >= 1");
  ReduceState st(h);
  const int n = h.n();
  const int batch = sc_batch_size(n, k, params.c);
  const int q = k + 1;
  const double neighbor_floor = (k - 1) * std::pow(static_cast<double>(params.t), 1.0 / (k - 1));
  int flagged = 0;
  std::vector<PhaseRecord> picks;

  for (int phase = 0;; ++phase) {
    Vertex high = -1;
    for (Vertex v = 0; v < n && high < 0; ++v)
      if (st.uncolored(v) && st.degree(v) > params.t) high = v;
    if (high < 0) break;

    // Batch of high-degree vertices with disjoint closed neighborhoods in H2.
    std::vector<char> removed2(static_cast<std::size_t>(n), 0);
    auto alive2 = [&](std::size_t e) {
      if (!st.alive(e)) return false;
      auto edge = h.edge(e);
      return std::none_of(edge.begin(), edge.end(), [&](Vertex u) { return removed2[u] != 0; });
    };
    VertexSet picked;
    while (static_cast<int>(picked.size()) < batch) {
      Vertex pick = -1;
      std::set<Vertex> nbrs;
      int deg = 0;
      for (Vertex v = 0; v < n && pick < 0; ++v) {
        if (!st.uncolored(v) || removed2[v]) continue;
        deg = 0;
        for (std::size_t e : h.incident(v)) deg += alive2(e);
        if (deg > params.t) pick = v;
      }
      if (pick < 0) break;
      for (std::size_t e : h.incident(pick)) {
        if (!alive2(e)) continue;
        for (Vertex u : h.edge(e))
          if (u != pick) nbrs.insert(u);
      }
      PhaseRecord rec;
      rec.step = "sc_pick";
      rec.picked_degree = deg;
      rec.picked_neighbors = static_cast<int>(nbrs.size());
      if (rec.picked_neighbors < neighbor_floor - 1e-9) ++flagged;
      picks.push_back(rec);
      removed2[pick] = 1;
      for (Vertex u : nbrs) removed2[u] = 1;
      picked.push_back(pick);
    }

    // Neighborhoods in H1 = H[uncolored].
    std::vector<VertexSet> nbr1(picked.size());
    for (std::size_t i = 0; i < picked.size(); ++i) {
      std::set<Vertex> s;
      for (std::size_t e : h.incident(picked[i])) {
        if (!st.alive(e)) continue;
        for (Vertex u : h.edge(e))
          if (u != picked[i]) s.insert(u);
      }
      nbr1[i].assign(s.begin(), s.end());
    }
    std::vector<char> is_picked(static_cast<std::size_t>(n), 0);
    for (Vertex v : picked) is_picked[v] = 1;
    const auto picked_edges = st.edges_inside(is_picked);

    std::vector<int> assign(picked.size(), 0);
    std::vector<int> local(static_cast<std::size_t>(n), -1);
    bool done = false;
    long long tried = 0;
    do {
      if (++tried > params.assignment_cap) break;
      for (std::size_t j = 0; j < picked.size(); ++j) local[picked[j]] = assign[j];
      bool ok = std::none_of(picked_edges.begin(), picked_edges.end(),
                             [&](const VertexSet& e) { return monochromatic(e, local); });
      if (!ok) continue;
      // Disjoint classes C_i in class order.
      std::vector<char> taken(is_picked);
      std::vector<VertexSet> classes(static_cast<std::size_t>(q));
      for (int i = 0; i < q; ++i) {
        std::set<Vertex> s;
        for (std::size_t j = 0; j < picked.size(); ++j)
          if (assign[j] == i)
            for (Vertex u : nbr1[j])
              if (!taken[u]) s.insert(u);
        classes[i].assign(s.begin(), s.end());
        for (Vertex u : classes[i]) taken[u] = 1;
      }
      std::vector<TwoColorResult> parts(static_cast<std::size_t>(q));
      for (int i = 0; i < q && ok; ++i) {
        if (classes[i].empty()) continue;
        std::vector<char> in(static_cast<std::size_t>(n), 0);
        for (Vertex u : classes[i]) in[u] = 1;
        Rng rng = make_rng(derive_seed(params.seed, "sc", static_cast<std::uint64_t>(phase)),
                           "walk", static_cast<std::uint64_t>(tried) * q + i);
        parts[i] = two_color_sets(n, classes[i], st.edges_inside(in), rng,
                                  walk_budget(classes[i].size(), params));
        ok = parts[i].success;
      }
      if (!ok) continue;
      const int before = st.colors_used();
      FreshPalette picked_palette(st);
      for (std::size_t j = 0; j < picked.size(); ++j) st.paint(picked[j], picked_palette(assign[j]));
      int colored = static_cast<int>(picked.size());
      for (int i = 0; i < q; ++i) {
        FreshPalette pal(st);
        for (Vertex u : classes[i]) st.paint(u, pal(parts[i].coloring[u]));
        colored += static_cast<int>(classes[i].size());
      }
      PhaseRecord rec;
      rec.step = "sc";
      st.push_phase(rec, before, colored);
      done = true;
    } while (!done && next_assignment(assign, q));
    for (Vertex v : picked) local[v] = -1;
    if (!done) {
      throw Error("assignment_exhausted",
                  "no assignment of " + std::to_string(picked.size()) +
                      " picked vertices gave 2-colorable neighborhoods (promise violated?)");
    }
  }

  PartialColoringResult out = st.finish();
  out.phases.insert(out.phases.begin(), picks.begin(), picks.end());
  out.degree_bound = params.t;
  out.color_bound = sc_color_bound(n, k, params.t, params.c);
  out.flagged_neighbor_counts = flagged;
  return out;
}

// ---------------------------------------------------------------------------
// Discrepancy and rainbow: biased (k-1)-sets force their completion sets

namespace {

// Bias rule: given local colors of a (k-1)-set, returns the color forced on
// its completion set, or -1 when the set is unbiased.
struct BiasRule {
  int q = 2;
  bool rainbow = false;

  int forced(const VertexSet& s, const std::vector<int>& color) const {
    std::vector<int> count(static_cast<std::size_t>(q), 0);
    for (Vertex v : s) ++count[color[v]];
    if (!rainbow) {
      // Discrepancy 2 forces the minority color on every completion.
      if (std::abs(count[0] - count[1]) != 2) return -1;
      return count[0] > count[1] ? 1 : 0;
    }
    int missing = -1, misses = 0;
    for (int c = 0; c < q; ++c)
      if (count[c] == 0) {
        missing = c;
        ++misses;
      }
    return misses == 1 ? missing : -1;
  }
};

class BiasReducer {
 public:
  BiasReducer(const Hypergraph& h, const ReduceParams& params, BiasRule rule, std::string tag)
      : h_(h), params_(params), rule_(rule), tag_(std::move(tag)), st_(h) {
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      auto edge = h.edge(e);
      for (int skip = 0; skip < h.k(); ++skip) {
        VertexSet s;
        for (int i = 0; i < h.k(); ++i)
          if (i != skip) s.push_back(edge[i]);
        index_[s].push_back(e);
      }
    }
    deleted1_.assign(h.num_edges(), 0);
    removed2_.assign(static_cast<std::size_t>(h.n()), 0);
  }

  PartialColoringResult run_full() {
    for (;;) {
      std::fill(deleted1_.begin(), deleted1_.end(), 0);
      if (!find_high(/*use_h2=*/false)) break;
      std::fill(removed2_.begin(), removed2_.end(), 0);
      T_.clear();
      marked_round_.clear();
      const int residual_before = st_.residual_n();
      const std::size_t marked_before = all_marked_.size();
      while (const VertexSet* s = find_high(/*use_h2=*/true)) {
        const VertexSet S = *s;
        for (Vertex u : completions(S, true)) removed2_[u] = 1;
        const VertexSet n1 = completions(S, false);
        if (st_.has_edge_inside(n1)) {
          mark(S);
        } else {
          T_.push_back(S);
          try_new_subsets();
        }
      }
      final_step();
      ++rounds_;
      if (st_.residual_n() == residual_before && all_marked_.size() == marked_before) {
        throw Error("internal", "degree reduction round made no progress");
      }
    }
    return finish();
  }

  PartialColoringResult run_warmup() {
    while (const VertexSet* s = find_high(/*use_h2=*/false)) {
      const VertexSet S = *s;
      const VertexSet n1 = completions(S, false);
      if (st_.has_edge_inside(n1)) {
        mark(S);
        continue;
      }
      const int before = st_.colors_used();
      const int a = st_.fresh(), b = st_.fresh();
      for (Vertex v : S) st_.paint(v, a);
      for (Vertex u : n1) st_.paint(u, b);
      PhaseRecord rec;
      rec.step = tag_ + "_split";
      st_.push_phase(rec, before, static_cast<int>(S.size() + n1.size()));
    }
    if (!color_marked_and(std::vector<VertexSet>{}, "marked", 0)) {
      throw Error("two_color_failed", "marked sets admit no 2-coloring found by the walk");
    }
    rounds_ = 1;
    return finish();
  }

 private:
  // Completion vertices of S over H1 (uncolored, not deleted by marking) or
  // H2 (uncolored, no vertex removed in this round).
  VertexSet completions(const VertexSet& S, bool use_h2) const {
    auto it = index_.find(S);
    if (it == index_.end()) return {};
    std::set<Vertex> out;
    for (std::size_t e : it->second) {
      if (!st_.alive(e)) continue;
      auto edge = h_.edge(e);
      if (use_h2) {
        if (std::any_of(edge.begin(), edge.end(), [&](Vertex u) { return removed2_[u] != 0; }))
          continue;
      } else if (deleted1_[e]) {
        continue;
      }
      for (Vertex u : edge)
        if (!std::binary_search(S.begin(), S.end(), u)) out.insert(u);
    }
    return {out.begin(), out.end()};
  }

  const VertexSet* find_high(bool use_h2) const {
    for (const auto& [s, edges] : index_) {
      if (static_cast<int>(edges.size()) <= params_.t) continue;
      if (static_cast<int>(completions(s, use_h2).size()) > params_.t) return &s;
    }
    return nullptr;
  }

  bool fully_uncolored(const VertexSet& s) const {
    return std::all_of(s.begin(), s.end(), [&](Vertex v) { return st_.uncolored(v); });
  }

  void drop_touched() {
    auto touched = [&](const VertexSet& s) { return !fully_uncolored(s); };
    T_.erase(std::remove_if(T_.begin(), T_.end(), touched), T_.end());
    marked_round_.erase(std::remove_if(marked_round_.begin(), marked_round_.end(), touched),
                        marked_round_.end());
  }

  void mark(const VertexSet& S) {
    marked_round_.push_back(S);
    all_marked_.push_back(S);
    for (std::size_t e : index_.at(S)) deleted1_[e] = 1;
    PhaseRecord rec;
    rec.step = "mark";
    st_.push_phase(rec, st_.colors_used(), 0);
  }

  // Tries every bias assignment of the given sets. On success the sets and
  // their forced completion sets are colored with fresh colors.
  bool try_bias(const std::vector<VertexSet>& sets, const std::string& step) {
    const VertexSet U = union_of(sets);
    std::vector<VertexSet> nbr;
    for (const auto& s : sets) nbr.push_back(completions(s, false));
    VertexSet X = U;
    for (const auto& n1 : nbr) X.insert(X.end(), n1.begin(), n1.end());
    std::sort(X.begin(), X.end());
    X.erase(std::unique(X.begin(), X.end()), X.end());
    std::vector<char> in(static_cast<std::size_t>(h_.n()), 0);
    for (Vertex v : X) in[v] = 1;
    const auto inside = st_.edges_inside(in);

    std::vector<int> local(static_cast<std::size_t>(h_.n()), -1);
    std::vector<int> assign(U.size(), 0);
    long long tried = 0;
    do {
      if (++tried > params_.assignment_cap) return false;
      std::fill(local.begin(), local.end(), -1);
      for (std::size_t i = 0; i < U.size(); ++i) local[U[i]] = assign[i];
      bool ok = true;
      for (std::size_t j = 0; j < sets.size() && ok; ++j) {
        const int f = rule_.forced(sets[j], local);
        if (f < 0) {
          ok = false;
          break;
        }
        for (Vertex u : nbr[j]) {
          if (local[u] >= 0 && local[u] != f) {
            ok = false;
            break;
          }
          local[u] = f;
        }
      }
      if (!ok) continue;
      if (std::any_of(inside.begin(), inside.end(),
                      [&](const VertexSet& e) { return monochromatic(e, local); }))
        continue;
      const int before = st_.colors_used();
      FreshPalette pal(st_);
      for (Vertex v : X) st_.paint(v, pal(local[v]));
      PhaseRecord rec;
      rec.step = step;
      st_.push_phase(rec, before, static_cast<int>(X.size()));
      return true;
    } while (next_assignment(assign, rule_.q));
    return false;
  }

  // Every size-c subset of T containing its newest member.
  void try_new_subsets() {
    const int c = params_.c;
    if (static_cast<int>(T_.size()) < c) return;
    const int older = static_cast<int>(T_.size()) - 1;
    std::vector<int> idx(static_cast<std::size_t>(c - 1));
    std::iota(idx.begin(), idx.end(), 0);
    do {
      std::vector<VertexSet> sets;
      for (int i : idx) sets.push_back(T_[i]);
      sets.push_back(T_.back());
      if (try_bias(sets, tag_ + "_bias")) {
        std::vector<char> used(T_.size(), 0);
        for (int i : idx) used[i] = 1;
        used.back() = 1;
        std::vector<VertexSet> rest;
        for (std::size_t i = 0; i < T_.size(); ++i)
          if (!used[i]) rest.push_back(T_[i]);
        T_ = std::move(rest);
        drop_touched();
        return;
      }
    } while (c > 1 && next_combination(idx, older));
  }

  // 2-colors the uncolored vertices of the given sets plus this round's
  // marked sets, subject to those sets and every H edge inside.
  bool color_marked_and(const std::vector<VertexSet>& extra, const std::string& step,
                        std::uint64_t attempt) {
    std::vector<VertexSet> sets = marked_round_;
    sets.insert(sets.end(), extra.begin(), extra.end());
    VertexSet X;
    for (const auto& s : sets)
      for (Vertex v : s)
        if (st_.uncolored(v)) X.push_back(v);
    std::sort(X.begin(), X.end());
    X.erase(std::unique(X.begin(), X.end()), X.end());
    if (X.empty()) return true;
    std::vector<char> in(static_cast<std::size_t>(h_.n()), 0);
    for (Vertex v : X) in[v] = 1;
    std::vector<VertexSet> constraints;
    for (const auto& s : sets)
      if (fully_uncolored(s)) constraints.push_back(s);
    for (auto& e : st_.edges_inside(in)) constraints.push_back(std::move(e));
    Rng rng = make_rng(derive_seed(params_.seed, tag_, static_cast<std::uint64_t>(rounds_)),
                       step, attempt);
    TwoColorResult walk =
        two_color_sets(h_.n(), X, constraints, rng, walk_budget(X.size(), params_));
    if (!walk.success) return false;
    const int before = st_.colors_used();
    FreshPalette pal(st_);
    for (Vertex v : X) st_.paint(v, pal(walk.coloring[v]));
    PhaseRecord rec;
    rec.step = step;
    st_.push_phase(rec, before, static_cast<int>(X.size()));
    return true;
  }

  // Splits T into a biased part B (|B| < c), colored through its forced
  // completions, and the rest A, 2-colored together with the marked sets.
  void final_step() {
    drop_touched();
    if (T_.empty() && marked_round_.empty()) return;
    const int c = params_.c;
    std::uint64_t attempt = 0;
    for (int size = 0; size < c && size <= static_cast<int>(T_.size()); ++size) {
      std::vector<int> idx(static_cast<std::size_t>(size));
      std::iota(idx.begin(), idx.end(), 0);
      do {
        std::vector<char> in_b(T_.size(), 0);
        std::vector<VertexSet> B, A;
        for (int i : idx) in_b[i] = 1;
        for (std::size_t i = 0; i < T_.size(); ++i) (in_b[i] ? B : A).push_back(T_[i]);
        if (B.empty()) {
          if (color_marked_and(A, "final", attempt++)) return finish_round();
          continue;
        }
        // try_bias commits on success, so roll back if the A walk then fails.
        ReduceState saved = st_;
        if (try_bias(B, "final_bias") && color_marked_and(A, "final", attempt++)) return finish_round();
        st_ = saved;
      } while (size > 0 && next_combination(idx, static_cast<int>(T_.size())));
    }
    throw Error("assignment_exhausted",
                "final split of " + std::to_string(T_.size()) + " sets found no proper coloring");
  }

  void finish_round() {
    T_.clear();
    marked_round_.clear();
  }

  PartialColoringResult finish() {
    PartialColoringResult out = st_.finish();
    out.marked = all_marked_;
    out.rounds = rounds_;
    out.degree_bound = set_degree_bound(h_.n(), h_.k(), params_.t);
    return out;
  }

  const Hypergraph& h_;
  ReduceParams params_;
  BiasRule rule_;
  std::string tag_;
  ReduceState st_;
  std::map<VertexSet, std::vector<std::size_t>> index_;
  std::vector<char> deleted1_;
  std::vector<char> removed2_;
  std::vector<VertexSet> T_;
  std::vector<VertexSet> marked_round_;
  std::vector<VertexSet> all_marked_;
  int rounds_ = 0;
};

}  // namespace

PartialColoringResult ld_degree_reduce(const Hypergraph& h, const ReduceParams& params,
                                       LdMode mode) {
  if (h.k() < 3 || h.k() % 2 == 0) throw Error("invalid_parameters", "need odd k >= 3");
  if (params.t < 1 || params.c < 1) throw Error("invalid_parameters", "need t >= 1 and c >= 1");
  BiasReducer reducer(h, params, BiasRule{2, false}, "ld");
  PartialColoringResult out =
      mode == LdMode::kWarmup ? reducer.run_warmup() : reducer.run_full();
  out.color_bound = ld_color_bound(h.n(), params.t, params.c);
  return out;
}

PartialColoringResult rc_degree_reduce(const Hypergraph& h, const ReduceParams& params) {
  if (h.k() < 3) throw Error("invalid_parameters", "need k >= 3");
  if (params.t < 1 || params.c < 1) throw Error("invalid_parameters", "need t >= 1 and c >= 1");
  BiasReducer reducer(h, params, BiasRule{h.k() - 1, true}, "rc");
  PartialColoringResult out = reducer.run_full();
  out.color_bound = rc_color_bound(h.n(), h.k(), params.t, params.c);
  return out;
}

// ---------------------------------------------------------------------------
// Bounded degree coloring by threshold rounding

namespace {

double upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

BoundedDegreeResult bounded_degree_color(const Hypergraph& h, const VectorSolution& v,
                                         int t, std::uint64_t seed,
                                         const VertexSet& vertices) {
  if (t < 1) throw Error("invalid_parameters", "need t >= 1");
  if (v.n() != h.n()) throw Error("size_mismatch", "solution does not match instance");
  const int k = h.k();
  std::vector<char> remaining(static_cast<std::size_t>(h.n()), vertices.empty() ? 1 : 0);
  for (Vertex u : vertices) remaining[u] = 1;
  {
    VertexSet active;
    for (Vertex u = 0; u < h.n(); ++u)
      if (remaining[u]) active.push_back(u);
    if (max_degree(induced(h, active)) > t) {
      throw Error("invalid_parameters", "max degree exceeds t = " + std::to_string(t));
    }
  }

  BoundedDegreeResult out;
  const double kk = static_cast<double>(k) * k - 1;
  out.tau = std::sqrt(2.0 * std::log(static_cast<double>(t)) / kk);
  out.gamma = std::pow(static_cast<double>(t), -1.0 / kk);
  out.phase_cap = 32.0 * std::log(std::max(2.0, static_cast<double>(h.n()))) / out.gamma;
  const double density =
      upper_tail(out.tau) - (static_cast<double>(t) / k) * upper_tail(k * out.tau);

  std::vector<int> color(static_cast<std::size_t>(h.n()), Coloring::kUnset);
  for (int phase = 0;; ++phase) {
    VertexSet active;
    for (Vertex u = 0; u < h.n(); ++u)
      if (remaining[u]) active.push_back(u);
    if (active.empty()) break;
    const Hypergraph h1 = induced(h, active);
    const int n1 = static_cast<int>(active.size());
    const long long target =
        std::max(1LL, static_cast<long long>(std::ceil(0.5 * n1 * density - 1e-12)));
    const long long cap =
        static_cast<long long>(std::ceil(32.0 * std::log(n1 + 1.0) / out.gamma));

    VertexSet chosen;
    std::size_t best = 0;
    long long attempt = 0;
    for (; attempt < cap; ++attempt) {
      Rng rng = make_rng(derive_seed(seed, "bounded_degree", static_cast<std::uint64_t>(phase)),
                         "retry", static_cast<std::uint64_t>(attempt));
      VertexSet raw = threshold_independent_set(h1, v, out.tau, rng);
      std::vector<char> in(static_cast<std::size_t>(h.n()), 0);
      for (Vertex u : raw)
        if (remaining[u]) in[u] = 1;
      for (Vertex u : active)
        if (h1.degree(u) == 0) in[u] = 1;
      VertexSet I;
      for (Vertex u : active)
        if (in[u]) I.push_back(u);
      best = std::max(best, I.size());
      if (static_cast<long long>(I.size()) >= target) {
        chosen = std::move(I);
        break;
      }
    }
    out.total_retries += attempt;
    if (chosen.empty()) {
      throw Error("retry_cap", "phase " + std::to_string(phase) + ": best |I| = " +
                                   std::to_string(best) + " after " + std::to_string(cap) +
                                   " tries, target " + std::to_string(target) + " of " +
                                   std::to_string(n1));
    }
    const int fresh = out.colors_used++;
    for (Vertex u : chosen) {
      color[u] = fresh;
      remaining[u] = 0;
    }
    PhaseRecord rec;
    rec.step = "threshold";
    rec.colors = 1;
    rec.colored = static_cast<int>(chosen.size());
    rec.residual_n = n1 - rec.colored;
    out.log.push_back(rec);
    ++out.phases;
  }
  out.coloring = Coloring(std::max(1, out.colors_used), color);
  if (!is_proper(h, out.coloring)) {
    throw Error("internal", "threshold rounding produced a monochromatic edge");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full pipeline

Coloring greedy_color(const Hypergraph& h) {
  std::vector<int> color(static_cast<std::size_t>(h.n()), Coloring::kUnset);
  int palette = 1;
  for (Vertex v = 0; v < h.n(); ++v) {
    std::set<int> forbidden;
    for (std::size_t e : h.incident(v)) {
      int shared = Coloring::kUnset;
      bool same = true;
      for (Vertex u : h.edge(e)) {
        if (u == v) continue;
        if (color[u] == Coloring::kUnset || (shared != Coloring::kUnset && color[u] != shared)) {
          same = false;
          break;
        }
        shared = color[u];
      }
      if (same && shared != Coloring::kUnset) forbidden.insert(shared);
    }
    int c = 0;
    while (forbidden.count(c)) ++c;
    color[v] = c;
    palette = std::max(palette, c + 1);
  }
  return Coloring(palette, color);
}

MinColorResult min_color(const Hypergraph& h, const PromiseKind& kind,
                         const MinColorParams& params) {
  kind.validate(h.k());
  MinColorResult out;
  ReduceParams rp;
  rp.t = params.t > 0 ? params.t : std::max(1, max_degree(h));
  rp.c = params.c;
  rp.seed = derive_seed(params.seed, "reduce");
  try {
    switch (kind.type) {
      case PromiseKind::Type::kStrong: out.reduction = sc_degree_reduce(h, rp); break;
      case PromiseKind::Type::kDiscrepancy:
        out.reduction = ld_degree_reduce(h, rp, LdMode::kFull);
        break;
      case PromiseKind::Type::kRainbow: out.reduction = rc_degree_reduce(h, rp); break;
    }
  } catch (const Error& e) {
    throw Error(e.code(), "reduce: " + std::string(e.what()));
  }
  const Hypergraph& residual = out.reduction.residual;
  out.reduction_colors = out.reduction.colors_used;

  SolveParams sp = params.solver;
  sp.seed = derive_seed(params.seed, "solve");
  SolveResult solved = solve(residual, kind, sp);
  out.solver_converged = solved.converged;
  out.solver_violation = solved.report.max_violation();

  if (!out.reduction.uncolored.empty()) {
    try {
      out.rounding = bounded_degree_color(residual, solved.solution,
                                          std::max(1, max_degree(residual)),
                                          derive_seed(params.seed, "round"),
                                          out.reduction.uncolored);
    } catch (const Error& e) {
      throw Error(e.code(), "round: " + std::string(e.what()));
    }
    out.rounding_colors = out.rounding.colors_used;
  }

  std::vector<int> color = out.reduction.coloring.colors();
  for (Vertex u : out.reduction.uncolored) color[u] = out.reduction_colors + out.rounding.coloring[u];
  out.colors_used = out.reduction_colors + out.rounding_colors;
  out.coloring = Coloring(std::max(1, out.colors_used), std::move(color));
  out.log = out.reduction.phases;
  out.log.insert(out.log.end(), out.rounding.log.begin(), out.rounding.log.end());
  if (!out.coloring.is_total() || !is_proper(h, out.coloring)) {
    throw Error("internal", "min_color produced an improper coloring");
  }
  return out;
}

}  // namespace hcolor
