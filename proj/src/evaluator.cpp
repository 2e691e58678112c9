#include "oe/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <istream>
#include <numeric>
#include <ostream>

#include "oe/error.hpp"
#include "oe/text.hpp"

namespace oe {

LabeledPairSet build_labeled_set(std::span<const TripletEdge> test_edges, const ConceptTable& names,
                                 const Reachability& full_closure, Rng& rng) {
    LabeledPairSet out;
    out.reserve(test_edges.size() * 2);
    bool corrupt_parent = true;
    for (const auto& e : test_edges) {
        auto [c, p] = sample_negative_either(full_closure, rng, e,
                                           corrupt_parent ? CorruptSide::parent : CorruptSide::child);
        corrupt_parent = !corrupt_parent;
        out.push_back({names.name(e.child), names.name(e.parent), true});
        out.push_back({names.name(c), names.name(p), false});
    }
    return out;
}

LabeledPairSet read_labeled_pairs(std::istream& in) {
    LabeledPairSet out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto f = text::split_tabs(line);
        if (f.size() != 3) throw ParseError(lineno, "expected term1<TAB>term2<TAB>label");
        if (f[2] != "1" && f[2] != "0") throw ParseError(lineno, "label must be 1 or 0");
        out.push_back({std::string(f[0]), std::string(f[1]), f[2] == "1"});
    }
    return out;
}

LabeledPairSet read_labeled_pairs(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    return read_labeled_pairs(in);
}

void write_labeled_pairs(const LabeledPairSet& set, std::ostream& out) {
    for (const auto& p : set) out << p.child << '\t' << p.parent << '\t' << (p.positive ? '1' : '0') << '\n';
}

void write_labeled_pairs(const LabeledPairSet& set, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot write " + file.string());
    write_labeled_pairs(set, out);
}

bool predict(double score, double threshold, Polarity polarity) {
    return polarity == Polarity::low_is_positive ? score <= threshold : score >= threshold;
}

namespace {

double below(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
double above(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

}  // namespace

ThresholdChoice tune_threshold(std::span<const double> scores, std::span<const std::uint8_t> labels,
                               Polarity polarity) {
    if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
    if (scores.empty()) throw std::invalid_argument("cannot tune a threshold on an empty set");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    const std::size_t total_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    const std::size_t total_neg = n - total_pos;
    // For each split point k (scores[order[0..k)] on the low side) count labels.
    // Low side predicted positive under low_is_positive, negative otherwise.
    auto correct_for_split = [&](std::size_t low_pos, std::size_t low_neg) {
        if (polarity == Polarity::low_is_positive) return low_pos + (total_neg - low_neg);
        return low_neg + (total_pos - low_pos);
    };

    ThresholdChoice best{0.0, -1.0};
    auto consider = [&](double threshold, std::size_t correct) {
        double acc = static_cast<double>(correct) / static_cast<double>(n);
        if (acc > best.accuracy) best = {threshold, acc};
    };

    const double lo = scores[order.front()];
    const double hi = scores[order.back()];
    // Split with nothing on the low side.
    consider(polarity == Polarity::low_is_positive ? below(lo) : lo, correct_for_split(0, 0));
    std::size_t low_pos = 0, low_neg = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] ? low_pos : low_neg)++;
            ++j;
        }
        double threshold;
        if (j < n) {
            threshold = 0.5 * (scores[order[i]] + scores[order[j]]);
        } else {
            threshold = polarity == Polarity::low_is_positive ? hi : above(hi);
        }
        consider(threshold, correct_for_split(low_pos, low_neg));
        i = j;
    }
    return best;
}

PairScores score_pairs(const Model& model, const LabeledPairSet& pairs, Exec exec) {
    PairScores out;
    std::vector<std::pair<PhraseRef, PhraseRef>> phrases;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto c = model.vocab.phrase(pairs[i].child);
        auto p = model.vocab.phrase(pairs[i].parent);
        if (!c || !p) {
            out.excluded.push_back(i);
            continue;
        }
        phrases.emplace_back(std::move(*c), std::move(*p));
        out.labels.push_back(pairs[i].positive ? 1 : 0);
        out.index.push_back(i);
    }
    out.scores = model.kind == ModelKind::order ? kernels::order_energies(model.table, phrases, exec)
                                                : kernels::bilinear_scores(model.table, *model.bilinear, phrases, exec);
    return out;
}

ThresholdChoice tune_threshold(const Model& model, const LabeledPairSet& dev, Exec exec) {
    PairScores s = score_pairs(model, dev, exec);
    return tune_threshold(s.scores, s.labels, polarity_for(model.kind));
}

EvalReport evaluate(const Model& model, const LabeledPairSet& test, double threshold, Exec exec) {
    PairScores s = score_pairs(model, test, exec);
    EvalReport r;
    r.threshold = threshold;
    r.excluded = s.excluded.size();
    const Polarity pol = polarity_for(model.kind);
    for (std::size_t i = 0; i < s.scores.size(); ++i) {
        bool pred = predict(s.scores[i], threshold, pol);
        bool gold = s.labels[i] != 0;
        if (pred && gold) ++r.tp;
        else if (pred && !gold) ++r.fp;
        else if (!pred && !gold) ++r.tn;
        else ++r.fn;
    }
    r.accuracy = r.total() == 0 ? 0.0 : static_cast<double>(r.tp + r.tn) / static_cast<double>(r.total());
    r.energies = std::move(s.scores);
    r.index = std::move(s.index);
    return r;
}

void print_report(const EvalReport& r, std::ostream& out) {
    auto flags = out.flags();
    out << std::left << std::setw(12) << "accuracy" << std::fixed << std::setprecision(4) << r.accuracy << '\n'
        << std::setw(12) << "threshold" << std::setprecision(6) << r.threshold << '\n';
    out.flags(flags);
    out << std::left << std::setw(12) << "pairs" << r.total() << '\n'
        << std::setw(12) << "excluded" << r.excluded << '\n'
        << std::setw(12) << "" << std::setw(10) << "gold+" << "gold-" << '\n'
        << std::setw(12) << "pred+" << std::setw(10) << r.tp << r.fp << '\n'
        << std::setw(12) << "pred-" << std::setw(10) << r.fn << r.tn << '\n';
    out.flags(flags);
}

void print_report_kv(const EvalReport& r, std::ostream& out) {
    auto prec = out.precision(10);
    out << "accuracy=" << r.accuracy << '\n'
        << "threshold=" << r.threshold << '\n'
        << "tp=" << r.tp << '\n'
        << "fp=" << r.fp << '\n'
        << "tn=" << r.tn << '\n'
        << "fn=" << r.fn << '\n'
        << "excluded=" << r.excluded << '\n';
    out.precision(prec);
}

}  // namespace oe
