#include "oe/synth.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace oe::synth {

OntologyGraph balanced_tree(int depth, int branching) {
    if (depth < 1 || branching < 1) throw std::invalid_argument("tree depth and branching must be >= 1");
    std::size_t nodes = 1, level = 1;
    for (int d = 0; d < depth; ++d) {
        level *= static_cast<std::size_t>(branching);
        nodes += level;
    }
    ConceptTable names;
    for (std::size_t i = 0; i < nodes; ++i) names.intern("n" + std::to_string(i));
    std::vector<TripletEdge> edges;
    for (std::size_t child = 1; child < nodes; ++child)
        edges.push_back({static_cast<ConceptId>(child),
                         static_cast<ConceptId>((child - 1) / static_cast<std::size_t>(branching)),
                         Provenance::original});
    return OntologyGraph(std::move(names), std::move(edges));
}

OntologyGraph random_dag(std::size_t nodes, double edge_prob, Rng& rng) {
    ConceptTable names;
    for (std::size_t i = 0; i < nodes; ++i) names.intern("n" + std::to_string(i));
    std::vector<TripletEdge> edges;
    for (std::size_t i = 0; i < nodes; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (uniform01(rng) < edge_prob)
                edges.push_back({static_cast<ConceptId>(i), static_cast<ConceptId>(j), Provenance::original});
    return OntologyGraph(std::move(names), std::move(edges));
}

Split make_split(const OntologyGraph& full, double train_fraction, std::uint64_t seed) {
    if (train_fraction < 0 || train_fraction > 1) throw std::invalid_argument("train fraction must be in [0, 1]");
    Reachability reach = compute_reachability(full);
    Split s{transitive_closure(full, reach), {}, {}, {}, {}, {}};
    OntologyGraph reduction = transitive_reduction(full);

    std::vector<TripletEdge> extra;
    for (const auto& e : s.full_closure.edges())
        if (!reduction.has_edge(e.child, e.parent)) extra.push_back({e.child, e.parent, Provenance::closure});
    Rng split_rng = make_stream(seed, "synth.split");
    shuffle(std::span<TripletEdge>(extra), split_rng);

    const auto n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(extra.size()));
    const std::size_t n_held = extra.size() - n_train;
    std::vector<TripletEdge> train(reduction.edges().begin(), reduction.edges().end());
    for (auto& e : train) e.provenance = Provenance::original;
    train.insert(train.end(), extra.begin(), extra.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.dev_edges.assign(extra.begin() + static_cast<std::ptrdiff_t>(n_train),
                       extra.begin() + static_cast<std::ptrdiff_t>(n_train + n_held / 2));
    s.test_edges.assign(extra.begin() + static_cast<std::ptrdiff_t>(n_train + n_held / 2), extra.end());
    s.train = OntologyGraph(full.concepts(), std::move(train), full.relation());

    Rng dev_rng = make_stream(seed, "synth.dev_negatives");
    Rng test_rng = make_stream(seed, "synth.test_negatives");
    s.dev = build_labeled_set(s.dev_edges, full.concepts(), reach, dev_rng);
    s.test = build_labeled_set(s.test_edges, full.concepts(), reach, test_rng);
    return s;
}

void write_sibling_corpus(const OntologyGraph& tree, std::size_t bytes, Rng& rng, std::ostream& out) {
    static const char* const kFiller[] = {"the", "of", "and", "a", "in", "is", "with", "such", "as"};
    std::vector<ConceptId> internal;
    for (ConceptId c = 0; c < tree.num_concepts(); ++c)
        if (tree.children(c).size() >= 2) internal.push_back(c);
    if (internal.empty()) throw std::invalid_argument("graph has no node with two or more children");
    const auto& names = tree.concepts();
    std::size_t written = 0;
    std::string line;
    while (written < bytes) {
        ConceptId p = internal[uniform_index(rng, internal.size())];
        auto kids = tree.children(p);
        line.clear();
        for (int k = 0; k < 12; ++k) {
            if (!line.empty()) line.push_back(' ');
            if (uniform01(rng) < 0.75)
                line += names.name(kids[uniform_index(rng, kids.size())]);
            else
                line += kFiller[uniform_index(rng, std::size(kFiller))];
        }
        line.push_back('\n');
        out << line;
        written += line.size();
    }
}

}  // namespace oe::synth
