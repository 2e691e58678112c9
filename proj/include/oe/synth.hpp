#ifndef OE_SYNTH_HPP
#define OE_SYNTH_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "oe/evaluator.hpp"
#include "oe/ontology.hpp"
#include "oe/random.hpp"

namespace oe::synth {

// Complete tree with `depth` edge levels: node i is named "n<i>" and has
// children branching*i+1 .. branching*i+branching. depth 7, branching 2
// gives 255 nodes.
OntologyGraph balanced_tree(int depth, int branching = 2);

// Random DAG on `nodes` concepts: each pair (i > j) gets edge i -> j with
// probability `edge_prob`. Isolated concepts are kept.
OntologyGraph random_dag(std::size_t nodes, double edge_prob, Rng& rng);

struct Split {
    OntologyGraph full_closure;
    OntologyGraph train;              // reduction + sampled closure edges
    std::vector<TripletEdge> dev_edges, test_edges;
    LabeledPairSet dev, test;
};

// Train = transitive reduction plus `train_fraction` of the remaining
// closure edges; the rest is halved into dev/test positives, each paired
// with one corrupted negative checked against the full closure.
Split make_split(const OntologyGraph& full, double train_fraction, std::uint64_t seed);

// Lines of sibling tokens (children of one random internal node) mixed with
// a few filler words until about `bytes` bytes have been written.
void write_sibling_corpus(const OntologyGraph& tree, std::size_t bytes, Rng& rng, std::ostream& out);

}  // namespace oe::synth

#endif  // OE_SYNTH_HPP
