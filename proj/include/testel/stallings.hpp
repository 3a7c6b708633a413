#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "testel/word.hpp"

namespace testel {

/// Folded, basepointed, deterministic labeled graph (Stallings graph) of a
/// finitely generated subgroup of the free group of rank `rank()`.
///
/// Vertices are numbered canonically: the basepoint is 0 and the remaining
/// vertices follow breadth-first discovery with edges scanned in alphabet
/// order, so two graphs of the same subgroup compare equal.
class SubgroupGraph {
 public:
  static constexpr std::int32_t kNoEdge = -1;

  /// Folds the bouquet of generator loops and trims to the core
  /// (the basepoint is kept even at degree one).
  static SubgroupGraph build(int rank, std::span<const Word> generators);

  /// Adopts an explicit deterministic edge table indexed by
  /// vertex * 2 * rank + letter_code. Every edge must have its reverse. The
  /// table is renumbered canonically; no trimming is done.
  static SubgroupGraph from_table(int rank, std::size_t vertices,
                                  std::vector<std::int32_t> table);

  int rank() const noexcept { return rank_; }
  std::size_t vertex_count() const noexcept { return vertices_; }
  std::size_t edge_count() const;  // positive edges
  static constexpr std::size_t basepoint() noexcept { return 0; }

  /// Endpoint of the edge leaving `vertex` labelled `letter`, or kNoEdge.
  std::int32_t target(std::size_t vertex, Letter letter) const {
    return table_[vertex * alphabet() + static_cast<std::size_t>(letter_code(letter))];
  }
  std::int32_t target_code(std::size_t vertex, int code) const {
    return table_[vertex * alphabet() + static_cast<std::size_t>(code)];
  }
  std::size_t degree(std::size_t vertex) const;

  /// Endpoint of the path spelled by w from `start`, or nullopt if it falls off.
  std::optional<std::size_t> walk(const Word& w, std::size_t start = 0) const;
  bool contains(const Word& w) const;
  /// Number of vertices when the graph is a covering (every vertex has full
  /// degree 2*rank); nullopt means infinite index.
  std::optional<std::size_t> index() const;
  /// Single vertex carrying a loop for every generator.
  bool is_rose() const;

  /// Edge list: header `basepoint 0 vertices V rank n`, then one
  /// `(u, x<i>, v)` line per positive edge.
  std::string serialize() const;
  static SubgroupGraph parse(std::string_view text);

  friend bool operator==(const SubgroupGraph&, const SubgroupGraph&) = default;

 private:
  SubgroupGraph(int rank, std::size_t vertices, std::vector<std::int32_t> table)
      : rank_(rank), vertices_(vertices), table_(std::move(table)) {}

  std::size_t alphabet() const noexcept { return static_cast<std::size_t>(2 * rank_); }
  void canonicalize();

  int rank_ = 0;
  std::size_t vertices_ = 0;
  std::vector<std::int32_t> table_;
};

SubgroupGraph build_graph(int rank, std::span<const Word> generators);
inline bool contains(const SubgroupGraph& g, const Word& w) { return g.contains(w); }
inline std::optional<std::size_t> index(const SubgroupGraph& g) { return g.index(); }

/// Breadth-first spanning tree from the basepoint, edges scanned in alphabet
/// order; representatives[v] spells the tree path basepoint -> v.
struct Transversal {
  std::vector<Word> representatives;
  /// tree_edge[v * 2 * rank + code] marks edges of the spanning tree (both directions).
  std::vector<bool> tree_edge;
  std::size_t max_length() const;
};

Transversal schreier_transversal(const SubgroupGraph& g);

/// Schreier generators of a finite-index subgroup together with the
/// coset-walk rewriting into them.
///
/// Generators are the non-tree positive edges, ordered by (coset, letter):
/// the edge v --x_i--> w gives t_v x_i t_w^-1. Rewritten words are words over
/// an alphabet of rank generator_count(), letter j standing for generator j.
class SchreierSystem {
 public:
  SchreierSystem(const SubgroupGraph& graph, Transversal transversal);

  const SubgroupGraph& graph() const noexcept { return *graph_; }
  const Transversal& transversal() const noexcept { return transversal_; }
  const std::vector<Word>& generators() const noexcept { return generators_; }
  std::size_t generator_count() const noexcept { return generators_.size(); }

  /// 1-based Schreier letter on edge (vertex, positive letter index), 0 on tree edges.
  std::int32_t edge_label(std::size_t vertex, int letter_index) const {
    return labels_[vertex * static_cast<std::size_t>(graph_->rank()) +
                   static_cast<std::size_t>(letter_index - 1)];
  }

  /// Throws Domain if w is not in the subgroup.
  Word rewrite(const Word& w) const;
  /// Schreier letter exponent sums of the path spelled by w from `start`
  /// (need not close up); entries indexed by generator, 0-based.
  void accumulate_exponents(std::span<const Letter> letters, std::size_t start,
                            std::vector<long long>& sums, std::size_t* end = nullptr) const;
  /// Substitutes the generators back into a rewritten word.
  Word evaluate(const Word& rewritten) const;

 private:
  const SubgroupGraph* graph_;
  Transversal transversal_;
  std::vector<Word> generators_;
  std::vector<std::int32_t> labels_;
};

/// Throw Domain for infinite index.
std::vector<Word> schreier_generators(const SubgroupGraph& g, const Transversal& t);
Word rewrite_in_schreier(const SubgroupGraph& g, const Transversal& t, const Word& w);

/// Tuple of generator images; apply() substitutes and reduces.
struct Endomorphism {
  int rank = 0;
  std::vector<Word> images;

  friend bool operator==(const Endomorphism&, const Endomorphism&) = default;
};

Word apply(const Endomorphism& e, const Word& w);
/// Folding of the image set is the rose on rank() petals.
bool is_surjective(const Endomorphism& e);
/// Free groups of finite rank are Hopfian: surjective endomorphisms are automorphisms.
bool is_automorphism(const Endomorphism& e);
std::string to_string(const Endomorphism& e);

}  // namespace testel
