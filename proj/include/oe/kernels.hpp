#ifndef OE_KERNELS_HPP
#define OE_KERNELS_HPP

// Data-parallel kernels. Every kernel takes an Exec policy: `serial` is the
// reference implementation kept for testing, `parallel` runs the same loop
// body under OpenMP. Both produce identical output for any thread count.

#include <span>
#include <utility>
#include <vector>

#include "oe/ontology.hpp"

namespace oe {

enum class Exec { serial, parallel };

class EmbeddingTable;
struct BilinearParams;
struct PhraseRef;

namespace kernels {

// Sorted strict-ancestor list per concept, one DFS per source node.
std::vector<std::vector<ConceptId>> ancestor_lists(const OntologyGraph& g, Exec exec);

struct PairWitnesses {
    std::vector<ConceptId> common_children;  // nearest common descendants
    std::vector<ConceptId> common_parents;   // nearest common ancestors
};

// Nearest common child / parent antichains for each pair.
std::vector<PairWitnesses> nearest_witnesses(const Reachability& reach,
                                             std::span<const std::pair<ConceptId, ConceptId>> pairs,
                                             Exec exec);

// order_energy(child, parent) for every pair of phrases.
std::vector<double> order_energies(const EmbeddingTable& table,
                                   std::span<const std::pair<PhraseRef, PhraseRef>> pairs, Exec exec);

// bilinear_score(child, parent) for every pair of phrases.
std::vector<double> bilinear_scores(const EmbeddingTable& table, const BilinearParams& params,
                                    std::span<const std::pair<PhraseRef, PhraseRef>> pairs, Exec exec);

}  // namespace kernels
}  // namespace oe

#endif  // OE_KERNELS_HPP
