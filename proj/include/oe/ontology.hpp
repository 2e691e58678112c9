#ifndef OE_ONTOLOGY_HPP
#define OE_ONTOLOGY_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "oe/random.hpp"

namespace oe {

using ConceptId = std::uint32_t;

enum class Provenance : std::uint8_t { original, closure, join_mined, meet_mined };

std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view s);

// child Is-A parent: `child` is the specific term, `parent` the general one.
struct TripletEdge {
    ConceptId child = 0;
    ConceptId parent = 0;
    Provenance provenance = Provenance::original;

    friend bool operator==(const TripletEdge&, const TripletEdge&) = default;
};

// Interned concept surface strings with contiguous ids.
class ConceptTable {
   public:
    ConceptId intern(std::string_view name);
    std::optional<ConceptId> find(std::string_view name) const;
    const std::string& name(ConceptId id) const { return names_.at(id); }
    std::size_t size() const noexcept { return names_.size(); }
    std::span<const std::string> names() const noexcept { return names_; }

   private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, ConceptId> index_;
};

// Immutable Is-A graph. Edges are unique, never self loops, and parents /
// children adjacency (CSR, sorted) mirror the edge list exactly.
class OntologyGraph {
   public:
    OntologyGraph() = default;
    // Throws std::invalid_argument on self loops, duplicates or bad ids.
    OntologyGraph(ConceptTable concepts, std::vector<TripletEdge> edges, std::string relation = "IsA");

    const ConceptTable& concepts() const noexcept { return concepts_; }
    std::size_t num_concepts() const noexcept { return concepts_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::span<const TripletEdge> edges() const noexcept { return edges_; }
    const std::string& relation() const noexcept { return relation_; }

    std::span<const ConceptId> parents(ConceptId c) const;
    std::span<const ConceptId> children(ConceptId c) const;
    bool has_edge(ConceptId child, ConceptId parent) const;

   private:
    ConceptTable concepts_;
    std::vector<TripletEdge> edges_;
    std::string relation_ = "IsA";
    std::vector<std::size_t> up_offsets_, down_offsets_;
    std::vector<ConceptId> up_, down_;
};

// Strict reachability of an acyclic graph: ancestors(a) is every concept
// reachable from a through one or more child->parent edges.
class Reachability {
   public:
    Reachability() = default;
    Reachability(std::size_t num_concepts, std::vector<std::vector<ConceptId>> ancestor_lists);

    std::size_t num_concepts() const noexcept { return anc_offsets_.empty() ? 0 : anc_offsets_.size() - 1; }
    std::size_t num_pairs() const noexcept { return anc_.size(); }
    std::span<const ConceptId> ancestors(ConceptId c) const;
    std::span<const ConceptId> descendants(ConceptId c) const;
    // True iff `general` is reachable from `specific`.
    bool reaches(ConceptId specific, ConceptId general) const;
    bool comparable(ConceptId a, ConceptId b) const { return reaches(a, b) || reaches(b, a); }

   private:
    std::vector<std::size_t> anc_offsets_, desc_offsets_;
    std::vector<ConceptId> anc_, desc_;
};

struct LineIssue {
    std::size_t line;
    std::string message;
};

struct IngestResult {
    OntologyGraph graph;
    std::vector<LineIssue> malformed;  // recoverable per-line errors
    std::size_t cycles_dropped = 0;
    std::size_t duplicates_dropped = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t filtered_out = 0;  // rows with another relation
};

// Reads `term1 \t relation \t term2 [\t provenance]` rows. Terms are
// normalized; an edge that would close a cycle is dropped (later edge loses).
// Throws EmptyOntology when no row survives the relation filter.
IngestResult ingest_triplets(std::istream& in, std::string_view relation_filter = "IsA");
IngestResult ingest_triplets(const std::filesystem::path& file, std::string_view relation_filter = "IsA");

void write_triplets(const OntologyGraph& g, std::ostream& out, bool with_provenance = false);
void write_triplets(const OntologyGraph& g, const std::filesystem::path& file, bool with_provenance = false);

// Throws CycleError naming one cycle if `g` is not acyclic.
void require_acyclic(const OntologyGraph& g);

Reachability compute_reachability(const OntologyGraph& g);

// Original edges keep their provenance; implied edges are tagged `closure`.
OntologyGraph transitive_closure(const OntologyGraph& g);
OntologyGraph transitive_closure(const OntologyGraph& g, const Reachability& reach);

// The unique minimal subgraph with the same reachability.
OntologyGraph transitive_reduction(const OntologyGraph& g);

enum class CorruptSide : std::uint8_t { child, parent };

// Replaces one side of `positive` with a uniform concept until the pair is
// neither a closure edge nor a self pair. Throws NegativeSamplingExhausted
// once `max_retries` draws fail.
std::pair<ConceptId, ConceptId> sample_negative_pair(const Reachability& closure, Rng& rng,
                                                     const TripletEdge& positive, CorruptSide side,
                                                     int max_retries = 100);

// Tries `preferred` first and falls back to the other side when that side
// cannot yield a non-edge (e.g. corrupting the child of an edge into a root).
std::pair<ConceptId, ConceptId> sample_negative_either(const Reachability& closure, Rng& rng,
                                                       const TripletEdge& positive, CorruptSide preferred,
                                                       int max_retries = 100);

// Both endpoints drawn freely.
std::pair<ConceptId, ConceptId> sample_free_pair(const Reachability& closure, Rng& rng, int max_retries = 100);

}  // namespace oe

#endif  // OE_ONTOLOGY_HPP
