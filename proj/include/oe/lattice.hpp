#ifndef OE_LATTICE_HPP
#define OE_LATTICE_HPP

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "oe/kernels.hpp"
#include "oe/ontology.hpp"

namespace oe {

enum class ConstraintKind : std::uint8_t { common_child, common_parent };

std::string_view to_string(ConstraintKind k);
std::optional<ConstraintKind> parse_constraint_kind(std::string_view s);

// An incomparable pair (w1 < w2) and one nearest common child (join
// witness) or nearest common parent (meet witness).
struct JoinMeetConstraint {
    ConceptId w1 = 0;
    ConceptId w2 = 0;
    ConstraintKind kind = ConstraintKind::common_child;
    ConceptId witness = 0;

    friend auto operator<=>(const JoinMeetConstraint& a, const JoinMeetConstraint& b) {
        return std::tie(a.kind, a.w1, a.w2, a.witness) <=> std::tie(b.kind, b.w1, b.w2, b.witness);
    }
    friend bool operator==(const JoinMeetConstraint&, const JoinMeetConstraint&) = default;
};

struct ConstraintCounts {
    std::size_t common_child = 0;
    std::size_t common_parent = 0;
};
ConstraintCounts count_by_kind(std::span<const JoinMeetConstraint> cs);

struct PairSelection {
    std::vector<std::pair<ConceptId, ConceptId>> pairs;  // sorted, w1 < w2
    std::size_t incomparable_total = 0;
    bool sampled = false;
};

// All incomparable pairs when there are at most `max_pairs`, otherwise a
// seeded uniform sample of exactly `max_pairs` of them.
PairSelection select_incomparable_pairs(const Reachability& reach, std::size_t max_pairs, Rng& rng);

// Sorted, deduplicated constraints over the selected pairs. Throws
// CycleError on a cyclic graph.
std::vector<JoinMeetConstraint> mine_constraints(const OntologyGraph& g, std::size_t max_pairs, Rng& rng,
                                                 Exec exec = Exec::parallel);
std::vector<JoinMeetConstraint> mine_constraints(const Reachability& reach, std::size_t max_pairs, Rng& rng,
                                                 Exec exec = Exec::parallel);

// `kind \t w1 \t w2 \t witness` with surface strings.
void emit_constraints(std::span<const JoinMeetConstraint> cs, const ConceptTable& names, std::ostream& out);
void emit_constraints(std::span<const JoinMeetConstraint> cs, const ConceptTable& names,
                      const std::filesystem::path& file);

// Inverse of emit_constraints; terms must already be concepts of `names`.
std::vector<JoinMeetConstraint> parse_constraints(std::istream& in, const ConceptTable& names);
std::vector<JoinMeetConstraint> parse_constraints(const std::filesystem::path& file, const ConceptTable& names);

}  // namespace oe

#endif  // OE_LATTICE_HPP
