#include <algorithm>
#include <cstdint>

#include "oe/kernels.hpp"

namespace oe::kernels {

namespace {

class Bitset {
   public:
    explicit Bitset(std::size_t n) : words_((n + 63) / 64, 0) {}
    bool test_and_set(std::size_t i) {
        std::uint64_t bit = std::uint64_t{1} << (i % 64);
        bool was = words_[i / 64] & bit;
        words_[i / 64] |= bit;
        return was;
    }
    void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

   private:
    std::vector<std::uint64_t> words_;
};

// DFS from `source` along parent links; the visited bitset is cleared again
// through the output list so each call costs O(reachable subgraph).
void ancestors_of(const OntologyGraph& g, ConceptId source, Bitset& seen, std::vector<ConceptId>& stack,
                  std::vector<ConceptId>& out) {
    out.clear();
    stack.clear();
    stack.push_back(source);
    while (!stack.empty()) {
        ConceptId u = stack.back();
        stack.pop_back();
        for (ConceptId v : g.parents(u)) {
            if (!seen.test_and_set(v)) {
                out.push_back(v);
                stack.push_back(v);
            }
        }
    }
    for (ConceptId v : out) seen.reset(v);
    std::sort(out.begin(), out.end());
}

// Intersection of two sorted id lists.
void intersect(std::span<const ConceptId> a, std::span<const ConceptId> b, std::vector<ConceptId>& out) {
    out.clear();
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
}

// Members of `common` (sorted) with no other member strictly above them.
// `above(x)` lists the strict ancestors of x in the chosen direction and
// `is_above(x, y)` tests y in above(x); the cheaper scan is used.
template <class Above, class IsAbove>
std::vector<ConceptId> nearest(const std::vector<ConceptId>& common, Above above, IsAbove is_above) {
    std::vector<ConceptId> keep;
    for (ConceptId x : common) {
        bool dominated = false;
        auto up = above(x);
        if (up.size() <= common.size()) {
            for (ConceptId y : up)
                if (std::binary_search(common.begin(), common.end(), y)) {
                    dominated = true;
                    break;
                }
        } else {
            for (ConceptId y : common)
                if (y != x && is_above(x, y)) {
                    dominated = true;
                    break;
                }
        }
        if (!dominated) keep.push_back(x);
    }
    return keep;
}

PairWitnesses witnesses_for(const Reachability& reach, ConceptId a, ConceptId b, std::vector<ConceptId>& scratch) {
    PairWitnesses w;
    // Nearest common child: a common descendant with no common descendant above it.
    intersect(reach.descendants(a), reach.descendants(b), scratch);
    w.common_children = nearest(
        scratch, [&](ConceptId x) { return reach.ancestors(x); },
        [&](ConceptId x, ConceptId y) { return reach.reaches(x, y); });
    // Nearest common parent: a common ancestor with no common ancestor below it.
    intersect(reach.ancestors(a), reach.ancestors(b), scratch);
    w.common_parents = nearest(
        scratch, [&](ConceptId x) { return reach.descendants(x); },
        [&](ConceptId x, ConceptId y) { return reach.reaches(y, x); });
    return w;
}

}  // namespace

std::vector<std::vector<ConceptId>> ancestor_lists(const OntologyGraph& g, Exec exec) {
    const auto n = static_cast<std::int64_t>(g.num_concepts());
    std::vector<std::vector<ConceptId>> result(static_cast<std::size_t>(n));
    if (exec == Exec::serial) {
        Bitset seen(g.num_concepts());
        std::vector<ConceptId> stack;
        for (std::int64_t i = 0; i < n; ++i)
            ancestors_of(g, static_cast<ConceptId>(i), seen, stack, result[static_cast<std::size_t>(i)]);
        return result;
    }
#pragma omp parallel
    {
        Bitset seen(g.num_concepts());
        std::vector<ConceptId> stack;
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < n; ++i)
            ancestors_of(g, static_cast<ConceptId>(i), seen, stack, result[static_cast<std::size_t>(i)]);
    }
    return result;
}

std::vector<PairWitnesses> nearest_witnesses(const Reachability& reach,
                                             std::span<const std::pair<ConceptId, ConceptId>> pairs,
                                             Exec exec) {
    const auto n = static_cast<std::int64_t>(pairs.size());
    std::vector<PairWitnesses> result(pairs.size());
    if (exec == Exec::serial) {
        std::vector<ConceptId> scratch;
        for (std::int64_t i = 0; i < n; ++i) {
            const auto& [a, b] = pairs[static_cast<std::size_t>(i)];
            result[static_cast<std::size_t>(i)] = witnesses_for(reach, a, b, scratch);
        }
        return result;
    }
#pragma omp parallel
    {
        std::vector<ConceptId> scratch;
#pragma omp for schedule(dynamic, 256)
        for (std::int64_t i = 0; i < n; ++i) {
            const auto& [a, b] = pairs[static_cast<std::size_t>(i)];
            result[static_cast<std::size_t>(i)] = witnesses_for(reach, a, b, scratch);
        }
    }
    return result;
}

}  // namespace oe::kernels
