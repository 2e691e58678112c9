#ifndef OE_TRAINER_HPP
#define OE_TRAINER_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oe/evaluator.hpp"
#include "oe/lattice.hpp"
#include "oe/model.hpp"
#include "oe/ontology.hpp"

namespace oe {

struct TrainConfig {
    std::size_t dim = 50;
    double margin_order = 1.0;
    double margin_cbow = 1.0;
    double margin_joinmeet = 1.0;  // only for the negative-sampled join/meet variant
    double alpha1 = 1.0;           // order (or bilinear) term
    double alpha2 = 0.1;           // text term
    std::optional<double> alpha3;  // join/meet term, defaults to alpha1
    int window = 10;
    std::uint64_t min_count = 5;
    double subsample = 0.0;        // 0 disables frequent-word subsampling
    double text_ratio = 1.0;       // text windows per ontology edge
    double learning_rate = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    bool plain_sgd = false;
    int epochs = 2000;
    std::size_t batch_size = 16;   // ontology edges per optimizer step
    int negatives = 10;
    int negative_retries = 100;
    double init_scale = 0.1;
    double bilinear_noise = 0.01;
    std::uint64_t seed = 42;
    ModelKind model_kind = ModelKind::order;
    bool use_text = false;
    bool use_joinmeet = false;
    bool use_closure = false;
    bool joinmeet_margin_variant = false;
    bool corrupt_both_cbow = false;
    bool free_pair_negatives = false;
    bool checkpoint_optimizer = false;

    double joinmeet_weight() const { return alpha3.value_or(alpha1); }
    // Throws ConfigError on an invalid combination.
    void validate() const;
};

// Applies `key=value` settings (keys as in the CLI flags, dashes or
// underscores). Unknown keys and unparsable values throw ConfigError.
void apply_setting(TrainConfig& cfg, std::string_view key, std::string_view value);
void apply_config_file(TrainConfig& cfg, const std::filesystem::path& file);
std::map<std::string, std::string> describe(const TrainConfig& cfg);

enum class SlotKind : std::uint8_t { edge, window, constraint };

struct Slot {
    SlotKind kind;
    std::uint32_t index;  // position among slots of the same kind
    friend bool operator==(const Slot&, const Slot&) = default;
};

// Edge slots in order; after edge i (1-based) the running window total is
// floor(i * ratio), capped at `num_windows`. Throws on ratio <= 0.
std::vector<Slot> interleave_schedule(std::size_t num_edges, std::size_t num_windows, double ratio);

// Spreads `count` slots of `kind` evenly after the edge slots of `plan`
// using the same floor-of-running-product rule.
void interleave_extra(std::vector<Slot>& plan, SlotKind kind, std::size_t count);

struct EpochStats {
    int epoch = 0;
    double order_loss = 0.0;     // mean per ontology edge
    double cbow_loss = 0.0;      // mean per text window
    double joinmeet_loss = 0.0;  // mean per constraint
    std::size_t edges = 0, windows = 0, constraints = 0;
    std::optional<double> dev_accuracy;
    double seconds = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    std::optional<int> best_epoch;  // set when a dev set selected the model
    double wall_seconds = 0.0;
};

struct TrainResult {
    Model model;
    TrainReport report;
};

// Concepts of `g` and the constraint ids refer to the same ConceptTable.
TrainResult train(const OntologyGraph& g, const std::optional<std::filesystem::path>& corpus,
                  std::span<const JoinMeetConstraint> constraints, const TrainConfig& cfg,
                  const LabeledPairSet* dev = nullptr, std::ostream* log = nullptr);

void print_epoch(const EpochStats& s, std::ostream& out);
void print_summary(const TrainReport& r, std::ostream& out);

}  // namespace oe

#endif  // OE_TRAINER_HPP
