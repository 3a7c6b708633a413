#include "testel/stallings.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "testel/error.hpp"

namespace testel {

namespace {

// Union-find over vertex ids with per-root adjacency lists of (code, target).
class Folder {
 public:
  explicit Folder(int rank) : rank_(rank) { add_vertex(); }

  std::size_t add_vertex() {
    parent_.push_back(parent_.size());
    adjacency_.emplace_back();
    return parent_.size() - 1;
  }

  void add_edge(std::size_t from, int code, std::size_t to) {
    adjacency_[from].emplace_back(code, to);
    adjacency_[to].emplace_back(inverse_code(code), from);
  }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void fold() {
    std::vector<std::size_t> work(parent_.size());
    std::iota(work.begin(), work.end(), std::size_t{0});
    std::vector<std::int64_t> seen(static_cast<std::size_t>(2 * rank_), -1);
    while (!work.empty()) {
      const std::size_t v = find(work.back());
      work.pop_back();
      std::fill(seen.begin(), seen.end(), -1);
      bool conflict = false;
      for (auto& [code, target] : adjacency_[v]) {
        target = find(target);
        auto& slot = seen[static_cast<std::size_t>(code)];
        if (slot < 0) {
          slot = static_cast<std::int64_t>(target);
        } else if (static_cast<std::size_t>(slot) != target) {
          // Two edges with one label leave v: identify their endpoints and rescan.
          work.push_back(merge(static_cast<std::size_t>(slot), target));
          conflict = true;
          break;
        }
      }
      if (conflict) {
        work.push_back(find(v));
        continue;
      }
      auto& edges = adjacency_[v];
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
  }

  // Deterministic table over surviving roots (not yet canonical, untrimmed).
  std::pair<std::size_t, std::vector<std::int32_t>> table() {
    std::vector<std::int64_t> id(parent_.size(), -1);
    std::size_t count = 0;
    const std::size_t base = find(0);
    id[base] = static_cast<std::int64_t>(count++);
    for (std::size_t v = 0; v < parent_.size(); ++v) {
      if (find(v) == v && v != base) id[v] = static_cast<std::int64_t>(count++);
    }
    const auto alphabet = static_cast<std::size_t>(2 * rank_);
    std::vector<std::int32_t> out(count * alphabet, SubgroupGraph::kNoEdge);
    for (std::size_t v = 0; v < parent_.size(); ++v) {
      if (find(v) != v) continue;
      for (auto [code, target] : adjacency_[v]) {
        const auto slot = static_cast<std::size_t>(id[v]) * alphabet + static_cast<std::size_t>(code);
        const auto t = static_cast<std::int32_t>(id[find(target)]);
        require(out[slot] == SubgroupGraph::kNoEdge || out[slot] == t,
                ErrorCode::InvariantViolation, "folding left a non-deterministic vertex");
        out[slot] = t;
      }
    }
    return {count, std::move(out)};
  }

 private:
  std::size_t merge(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    // Keep the smaller id as the root so the basepoint survives as a root.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    auto& from = adjacency_[b];
    auto& to = adjacency_[a];
    to.insert(to.end(), from.begin(), from.end());
    from.clear();
    from.shrink_to_fit();
    return a;
  }

  int rank_;
  std::vector<std::size_t> parent_;
  std::vector<std::vector<std::pair<int, std::size_t>>> adjacency_;
};

}  // namespace

SubgroupGraph SubgroupGraph::build(int rank, std::span<const Word> generators) {
  require(rank >= 1, ErrorCode::InvalidArgument, "rank must be >= 1");
  Folder folder(rank);
  for (const Word& g : generators) {
    require(g.rank() <= rank, ErrorCode::RankMismatch, "generator rank exceeds graph rank");
    if (g.is_identity()) continue;
    std::size_t current = 0;
    const auto letters = g.letters();
    for (std::size_t i = 0; i < letters.size(); ++i) {
      const std::size_t next = (i + 1 == letters.size()) ? 0 : folder.add_vertex();
      folder.add_edge(current, letter_code(letters[i]), next);
      current = next;
    }
  }
  folder.fold();
  auto [count, table] = folder.table();

  // Trim hanging trees; the basepoint stays whatever its degree.
  const auto alphabet = static_cast<std::size_t>(2 * rank);
  std::vector<bool> alive(count, true);
  std::vector<std::size_t> degree(count, 0);
  for (std::size_t v = 0; v < count; ++v)
    for (std::size_t c = 0; c < alphabet; ++c)
      if (table[v * alphabet + c] != kNoEdge) ++degree[v];
  std::vector<std::size_t> stack;
  for (std::size_t v = 1; v < count; ++v)
    if (degree[v] <= 1) stack.push_back(v);
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (!alive[v]) continue;
    alive[v] = false;
    for (std::size_t c = 0; c < alphabet; ++c) {
      const auto t = table[v * alphabet + c];
      if (t == kNoEdge) continue;
      const auto u = static_cast<std::size_t>(t);
      table[u * alphabet + static_cast<std::size_t>(inverse_code(static_cast<int>(c)))] = kNoEdge;
      table[v * alphabet + c] = kNoEdge;
      if (u != v && alive[u] && --degree[u] <= 1 && u != 0) stack.push_back(u);
    }
  }
  SubgroupGraph g(rank, count, std::move(table));
  g.canonicalize();
  return g;
}

SubgroupGraph SubgroupGraph::from_table(int rank, std::size_t vertices,
                                        std::vector<std::int32_t> table) {
  const auto alphabet = static_cast<std::size_t>(2 * rank);
  require(rank >= 1 && vertices >= 1 && table.size() == vertices * alphabet,
          ErrorCode::InvalidArgument, "edge table has wrong shape");
  for (std::size_t v = 0; v < vertices; ++v) {
    for (std::size_t c = 0; c < alphabet; ++c) {
      const auto t = table[v * alphabet + c];
      if (t == kNoEdge) continue;
      require(t >= 0 && static_cast<std::size_t>(t) < vertices &&
                  table[static_cast<std::size_t>(t) * alphabet +
                        static_cast<std::size_t>(inverse_code(static_cast<int>(c)))] ==
                      static_cast<std::int32_t>(v),
              ErrorCode::InvalidArgument, "edge table is missing a reverse edge");
    }
  }
  SubgroupGraph g(rank, vertices, std::move(table));
  g.canonicalize();
  return g;
}

void SubgroupGraph::canonicalize() {
  const std::size_t a = alphabet();
  std::vector<std::int64_t> id(vertices_, -1);
  std::vector<std::size_t> order;
  order.reserve(vertices_);
  id[0] = 0;
  order.push_back(0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::size_t v = order[head];
    for (std::size_t c = 0; c < a; ++c) {
      const auto t = table_[v * a + c];
      if (t == kNoEdge || id[static_cast<std::size_t>(t)] >= 0) continue;
      id[static_cast<std::size_t>(t)] = static_cast<std::int64_t>(order.size());
      order.push_back(static_cast<std::size_t>(t));
    }
  }
  // Unreachable vertices are dropped.
  std::vector<std::int32_t> out(order.size() * a, kNoEdge);
  for (std::size_t nv = 0; nv < order.size(); ++nv) {
    for (std::size_t c = 0; c < a; ++c) {
      const auto t = table_[order[nv] * a + c];
      if (t != kNoEdge) out[nv * a + c] = static_cast<std::int32_t>(id[static_cast<std::size_t>(t)]);
    }
  }
  vertices_ = order.size();
  table_ = std::move(out);
}

std::size_t SubgroupGraph::edge_count() const {
  std::size_t n = 0;
  for (std::size_t v = 0; v < vertices_; ++v)
    for (int i = 1; i <= rank_; ++i)
      if (target(v, i) != kNoEdge) ++n;
  return n;
}

std::size_t SubgroupGraph::degree(std::size_t vertex) const {
  std::size_t d = 0;
  for (std::size_t c = 0; c < alphabet(); ++c)
    if (table_[vertex * alphabet() + c] != kNoEdge) ++d;
  return d;
}

std::optional<std::size_t> SubgroupGraph::walk(const Word& w, std::size_t start) const {
  require(w.rank() <= rank_, ErrorCode::RankMismatch, "word rank exceeds graph rank");
  std::size_t v = start;
  for (Letter l : w.letters()) {
    const auto t = target(v, l);
    if (t == kNoEdge) return std::nullopt;
    v = static_cast<std::size_t>(t);
  }
  return v;
}

bool SubgroupGraph::contains(const Word& w) const {
  const auto end = walk(w);
  return end && *end == basepoint();
}

std::optional<std::size_t> SubgroupGraph::index() const {
  for (std::size_t v = 0; v < vertices_; ++v)
    if (degree(v) != alphabet()) return std::nullopt;
  return vertices_;
}

bool SubgroupGraph::is_rose() const { return vertices_ == 1 && degree(0) == alphabet(); }

std::string SubgroupGraph::serialize() const {
  std::ostringstream out;
  out << "basepoint 0 vertices " << vertices_ << " rank " << rank_ << '\n';
  for (std::size_t v = 0; v < vertices_; ++v)
    for (int i = 1; i <= rank_; ++i) {
      const auto t = target(v, i);
      if (t != kNoEdge) out << '(' << v << ", x" << i << ", " << t << ")\n";
    }
  return out.str();
}

SubgroupGraph SubgroupGraph::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string word;
  std::size_t base = 0;
  std::size_t vertices = 0;
  int rank = 0;
  in >> word;
  require(word == "basepoint", ErrorCode::Parse, "graph text must start with a basepoint header");
  in >> base >> word;
  require(word == "vertices" && base == 0, ErrorCode::Parse, "malformed graph header");
  in >> vertices >> word >> rank;
  require(in && word == "rank" && rank >= 1 && vertices >= 1, ErrorCode::Parse,
          "malformed graph header");
  const auto alphabet = static_cast<std::size_t>(2 * rank);
  std::vector<std::int32_t> table(vertices * alphabet, kNoEdge);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t u = 0;
    std::size_t v = 0;
    int letter = 0;
    char c1 = 0, c2 = 0, x = 0, c3 = 0, c4 = 0;
    std::istringstream ls(line);
    ls >> c1 >> u >> c2 >> x >> letter >> c3 >> v >> c4;
    require(ls && c1 == '(' && c2 == ',' && x == 'x' && c3 == ',' && c4 == ')' && u < vertices &&
                v < vertices && letter >= 1 && letter <= rank,
            ErrorCode::Parse, "malformed edge line: " + line);
    const int code = letter_code(letter);
    auto& fwd = table[u * alphabet + static_cast<std::size_t>(code)];
    auto& back = table[v * alphabet + static_cast<std::size_t>(inverse_code(code))];
    require(fwd == kNoEdge && back == kNoEdge, ErrorCode::Parse,
            "graph text is not folded at: " + line);
    fwd = static_cast<std::int32_t>(v);
    back = static_cast<std::int32_t>(u);
  }
  return from_table(rank, vertices, std::move(table));
}

SubgroupGraph build_graph(int rank, std::span<const Word> generators) {
  return SubgroupGraph::build(rank, generators);
}

std::size_t Transversal::max_length() const {
  std::size_t m = 0;
  for (const auto& r : representatives) m = std::max(m, r.length());
  return m;
}

Transversal schreier_transversal(const SubgroupGraph& g) {
  require(g.index().has_value(), ErrorCode::Domain, "transversal requested for infinite index");
  const int rank = g.rank();
  const auto alphabet = static_cast<std::size_t>(2 * rank);
  Transversal t;
  t.representatives.assign(g.vertex_count(), Word(rank));
  t.tree_edge.assign(g.vertex_count() * alphabet, false);
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t v = queue[head];
    for (int c = 0; c < static_cast<int>(alphabet); ++c) {
      const auto target = g.target_code(v, c);
      if (target == SubgroupGraph::kNoEdge || seen[static_cast<std::size_t>(target)]) continue;
      const auto w = static_cast<std::size_t>(target);
      seen[w] = true;
      queue.push_back(w);
      t.representatives[w] = multiply(t.representatives[v], Word::reduce(rank, std::vector<Letter>{code_letter(c)}));
      t.tree_edge[v * alphabet + static_cast<std::size_t>(c)] = true;
      t.tree_edge[w * alphabet + static_cast<std::size_t>(inverse_code(c))] = true;
    }
  }
  return t;
}

SchreierSystem::SchreierSystem(const SubgroupGraph& graph, Transversal transversal)
    : graph_(&graph), transversal_(std::move(transversal)) {
  require(graph.index().has_value(), ErrorCode::Domain,
          "Schreier generators requested for infinite index");
  const int rank = graph.rank();
  const auto alphabet = static_cast<std::size_t>(2 * rank);
  labels_.assign(graph.vertex_count() * static_cast<std::size_t>(rank), 0);
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    for (int i = 1; i <= rank; ++i) {
      const auto code = static_cast<std::size_t>(letter_code(i));
      if (transversal_.tree_edge[v * alphabet + code]) continue;
      const auto w = static_cast<std::size_t>(graph.target(v, i));
      WordBuilder b(rank);
      b.append(transversal_.representatives[v]);
      b.push(i);
      b.append_inverse(transversal_.representatives[w]);
      generators_.push_back(std::move(b).build());
      labels_[v * static_cast<std::size_t>(rank) + static_cast<std::size_t>(i - 1)] =
          static_cast<std::int32_t>(generators_.size());
    }
  }
}

void SchreierSystem::accumulate_exponents(std::span<const Letter> letters, std::size_t start,
                                          std::vector<long long>& sums, std::size_t* end) const {
  std::size_t v = start;
  for (Letter l : letters) {
    const auto t = graph_->target(v, l);
    if (l > 0) {
      const auto label = edge_label(v, l);
      if (label) ++sums[static_cast<std::size_t>(label - 1)];
    } else {
      const auto label = edge_label(static_cast<std::size_t>(t), -l);
      if (label) --sums[static_cast<std::size_t>(label - 1)];
    }
    v = static_cast<std::size_t>(t);
  }
  if (end) *end = v;
}

Word SchreierSystem::rewrite(const Word& w) const {
  require(graph_->contains(w), ErrorCode::Domain, "word is not in the subgroup");
  WordBuilder b(static_cast<int>(generators_.size()));
  std::size_t v = 0;
  for (Letter l : w.letters()) {
    const auto t = static_cast<std::size_t>(graph_->target(v, l));
    if (l > 0) {
      if (const auto label = edge_label(v, l)) b.push(label);
    } else {
      if (const auto label = edge_label(t, -l)) b.push(-label);
    }
    v = t;
  }
  return std::move(b).build();
}

Word SchreierSystem::evaluate(const Word& rewritten) const {
  require(rewritten.rank() <= static_cast<int>(generators_.size()), ErrorCode::RankMismatch,
          "rewritten word uses letters beyond the Schreier alphabet");
  WordBuilder b(graph_->rank());
  for (Letter l : rewritten.letters()) {
    const auto& g = generators_[static_cast<std::size_t>(std::abs(l) - 1)];
    if (l > 0)
      b.append(g);
    else
      b.append_inverse(g);
  }
  return std::move(b).build();
}

std::vector<Word> schreier_generators(const SubgroupGraph& g, const Transversal& t) {
  return SchreierSystem(g, t).generators();
}

Word rewrite_in_schreier(const SubgroupGraph& g, const Transversal& t, const Word& w) {
  return SchreierSystem(g, t).rewrite(w);
}

Word apply(const Endomorphism& e, const Word& w) {
  require(w.rank() == e.rank && static_cast<int>(e.images.size()) == e.rank,
          ErrorCode::RankMismatch, "endomorphism and word ranks differ");
  WordBuilder b(e.rank);
  for (Letter l : w.letters()) {
    const auto& image = e.images[static_cast<std::size_t>(std::abs(l) - 1)];
    if (l > 0)
      b.append(image);
    else
      b.append_inverse(image);
  }
  return std::move(b).build();
}

bool is_surjective(const Endomorphism& e) {
  require(static_cast<int>(e.images.size()) == e.rank, ErrorCode::RankMismatch,
          "endomorphism needs one image per generator");
  return SubgroupGraph::build(e.rank, e.images).is_rose();
}

bool is_automorphism(const Endomorphism& e) { return is_surjective(e); }

std::string to_string(const Endomorphism& e) {
  std::string out;
  for (std::size_t i = 0; i < e.images.size(); ++i) {
    if (i) out += ", ";
    out += "x" + std::to_string(i + 1) + " -> " + to_string(e.images[i]);
  }
  return out;
}

}  // namespace testel
