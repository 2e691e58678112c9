#ifndef OE_EVALUATOR_HPP
#define OE_EVALUATOR_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oe/kernels.hpp"
#include "oe/model.hpp"
#include "oe/ontology.hpp"

namespace oe {

struct LabeledPair {
    std::string child;
    std::string parent;
    bool positive = false;
    friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

using LabeledPairSet = std::vector<LabeledPair>;

// All positives plus one corrupted non-edge each (sides alternate), every
// negative checked against `full_closure`. Output order: positive i is
// followed by its negative.
LabeledPairSet build_labeled_set(std::span<const TripletEdge> test_edges, const ConceptTable& names,
                                 const Reachability& full_closure, Rng& rng);

// `term1 \t term2 \t label` with label 1 or 0.
LabeledPairSet read_labeled_pairs(std::istream& in);
LabeledPairSet read_labeled_pairs(const std::filesystem::path& file);
void write_labeled_pairs(const LabeledPairSet& set, std::ostream& out);
void write_labeled_pairs(const LabeledPairSet& set, const std::filesystem::path& file);

enum class Polarity : std::uint8_t { low_is_positive, high_is_positive };

inline Polarity polarity_for(ModelKind k) {
    return k == ModelKind::order ? Polarity::low_is_positive : Polarity::high_is_positive;
}

// low_is_positive predicts positive when score <= threshold; high_is_positive
// when score >= threshold.
bool predict(double score, double threshold, Polarity polarity);

struct ThresholdChoice {
    double threshold = 0.0;
    double accuracy = 0.0;
};

// Candidates are the midpoints between adjacent distinct scores plus the two
// all-one-class extremes (the boundary score itself on the accepting side,
// the adjacent double past the boundary on the rejecting side). Returns the most accurate,
// the lowest threshold among ties.
ThresholdChoice tune_threshold(std::span<const double> scores, std::span<const std::uint8_t> labels,
                               Polarity polarity);

struct PairScores {
    std::vector<double> scores;          // one per scored pair
    std::vector<std::uint8_t> labels;    // aligned with scores
    std::vector<std::size_t> index;      // input index of each scored pair
    std::vector<std::size_t> excluded;   // input indices with an unresolvable term
};

// Energy (order) or bilinear score for each pair whose terms both resolve
// to at least one vocabulary token.
PairScores score_pairs(const Model& model, const LabeledPairSet& pairs, Exec exec = Exec::parallel);

ThresholdChoice tune_threshold(const Model& model, const LabeledPairSet& dev, Exec exec = Exec::parallel);

struct EvalReport {
    double accuracy = 0.0;
    double threshold = 0.0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t excluded = 0;
    std::vector<double> energies;        // aligned with `index`
    std::vector<std::size_t> index;
    std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

EvalReport evaluate(const Model& model, const LabeledPairSet& test, double threshold, Exec exec = Exec::parallel);

void print_report(const EvalReport& r, std::ostream& out);
void print_report_kv(const EvalReport& r, std::ostream& out);

}  // namespace oe

#endif  // OE_EVALUATOR_HPP
