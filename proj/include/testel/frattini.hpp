#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "testel/stallings.hpp"
#include "testel/surface.hpp"
#include "testel/word.hpp"

namespace testel {

/// True iff every exponent functional of w vanishes mod p.
bool in_frattini(const Word& w, const Group& group, int p);

struct FrattiniAdjustment {
  Word adjusted;                     // u = w * x_1^{a_1} ... x_m^{a_m}
  std::vector<long long> exponents;  // a_i, in [0, p-1] except a flipped entry
  std::optional<int> flipped;        // generator whose exponent was shifted by -p
  long long cost = 0;                // sum |a_i|
};

/// Right-multiplies w by powers of the working-basis generators so every
/// functional vanishes mod p. If the first candidate is trivial while some
/// exponent is nonzero, the exponent at the smallest such index is replaced
/// by a_j - p (for p = 2 this is the sign flip x_j -> x_j^-1), which keeps
/// the result nontrivial.
FrattiniAdjustment frattini_adjust(const Word& w, const Group& group, int p);

/// Preimage of the mod-p Frattini subgroup: the kernel of the mod-p
/// functionals, as a covering graph with p^m cosets, together with its
/// Schreier system and a basis of its mod-p abelianization.
///
/// For a free group the basis is every Schreier generator. For a surface
/// group the lifted relators (the relator read from each coset) cut the
/// mod-p abelianization down; Gaussian elimination over F_p picks pivot
/// generators to eliminate and the remaining Schreier generators form the
/// basis. Coordinates of an element in that basis are the functionals
/// sigma_{y_i}, and the element lies in the second Frattini layer iff all of
/// them vanish.
class FrattiniLayer {
 public:
  FrattiniLayer(const Group& group, int p, std::size_t max_cosets);

  const Group& group() const noexcept { return group_; }
  int prime() const noexcept { return p_; }
  const SubgroupGraph& graph() const noexcept { return *graph_; }
  const SchreierSystem& schreier() const noexcept { return *schreier_; }

  /// Indices (into schreier().generators()) of the basis generators.
  const std::vector<std::size_t>& basis() const noexcept { return basis_; }
  std::vector<Word> basis_generators() const;
  std::size_t relation_rank() const noexcept { return pivots_.size(); }

  /// sigma_{y_i}(w) mod p for each basis generator. Throws Domain unless w is
  /// in the first Frattini layer.
  std::vector<int> coordinates(const Word& w) const;
  bool contains_in_second_layer(const Word& w) const;

 private:
  std::vector<int> schreier_exponents(const Word& w) const;

  Group group_;
  int p_;
  std::unique_ptr<SubgroupGraph> graph_;
  std::unique_ptr<SchreierSystem> schreier_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<std::uint8_t>> rows_;  // reduced relation rows, one per pivot
};

/// Shared, lazily built layer for (group, p). Throws ResourceLimit when p^m
/// exceeds max_cosets.
std::shared_ptr<const FrattiniLayer> frattini_layer(const Group& group, int p,
                                                    std::size_t max_cosets = 1000);

/// Second-layer membership; throws Domain when w is not in the first layer.
bool in_frattini2(const Word& w, const Group& group, int p, std::size_t max_cosets = 1000);

}  // namespace testel
