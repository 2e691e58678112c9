#include "oe/trainer.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>

#include "oe/error.hpp"
#include "oe/objectives.hpp"

namespace oe {

std::vector<Slot> interleave_schedule(std::size_t num_edges, std::size_t num_windows, double ratio) {
    if (!(ratio > 0)) throw std::invalid_argument("interleave ratio must be > 0");
    std::vector<Slot> plan;
    std::size_t emitted = 0;
    for (std::size_t i = 0; i < num_edges; ++i) {
        plan.push_back({SlotKind::edge, static_cast<std::uint32_t>(i)});
        auto due = static_cast<std::size_t>(std::floor(static_cast<double>(i + 1) * ratio));
        due = std::min(due, num_windows);
        for (; emitted < due; ++emitted) plan.push_back({SlotKind::window, static_cast<std::uint32_t>(emitted)});
    }
    return plan;
}

void interleave_extra(std::vector<Slot>& plan, SlotKind kind, std::size_t count) {
    if (count == 0) return;
    std::size_t num_edges = 0;
    for (const auto& s : plan) num_edges += s.kind == SlotKind::edge;
    std::vector<Slot> out;
    out.reserve(plan.size() + count);
    std::size_t emitted = 0, edges_seen = 0;
    auto flush = [&](std::size_t due) {
        for (; emitted < due; ++emitted) out.push_back({kind, static_cast<std::uint32_t>(emitted)});
    };
    for (const auto& s : plan) {
        if (s.kind == SlotKind::edge && edges_seen > 0)
            flush(edges_seen * count / num_edges);
        out.push_back(s);
        edges_seen += s.kind == SlotKind::edge;
    }
    flush(count);
    plan = std::move(out);
}

namespace {

class Trainer {
   public:
    Trainer(const OntologyGraph& g, const std::optional<std::filesystem::path>& corpus,
            std::span<const JoinMeetConstraint> constraints, const TrainConfig& cfg, const LabeledPairSet* dev,
            std::ostream* log)
        : g_(g),
          constraints_(constraints),
          cfg_(cfg),
          dev_(dev),
          log_(log),
          shuffle_rng_(make_stream(cfg.seed, "trainer.shuffle")),
          neg_rng_(make_stream(cfg.seed, "trainer.negatives")),
          cbow_rng_(make_stream(cfg.seed, "trainer.cbow")),
          joinmeet_rng_(make_stream(cfg.seed, "trainer.joinmeet")),
          subsample_rng_(make_stream(cfg.seed, "trainer.subsample")) {
        cfg_.validate();
        if (g.num_edges() == 0) throw ConfigError("training graph has no edges");
        if (cfg.use_text && !corpus) throw ConfigError("use-text requires a corpus");
        if (cfg.use_joinmeet && constraints.empty()) throw ConfigError("use-joinmeet requires constraints");
        for (const auto& c : constraints)
            if (c.w1 >= g.num_concepts() || c.w2 >= g.num_concepts() || c.witness >= g.num_concepts())
                throw ConfigError("constraint references a concept outside the training graph");

        text_active_ = cfg.use_text && cfg.alpha2 != 0.0;
        joinmeet_active_ = cfg.use_joinmeet && cfg.joinmeet_weight() != 0.0;
        order_active_ = cfg.alpha1 != 0.0;
        adam_ = {cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon, cfg.plain_sgd};

        reach_ = compute_reachability(g);
        if (cfg.use_closure) {
            OntologyGraph closed = transitive_closure(g, reach_);
            positives_.assign(closed.edges().begin(), closed.edges().end());
        } else {
            positives_.assign(g.edges().begin(), g.edges().end());
        }

        std::vector<std::string> terms(g.concepts().names().begin(), g.concepts().names().end());
        model_.kind = cfg.model_kind;
        model_.vocab = build_vocab(cfg.use_text ? corpus : std::nullopt, cfg.min_count, terms);
        for (ConceptId c = 0; c < g.num_concepts(); ++c) {
            auto p = model_.vocab.phrase(g.concepts().name(c));
            if (!p) throw ConfigError("concept '" + g.concepts().name(c) + "' has no usable tokens");
            phrases_.push_back(std::move(*p));
        }

        Rng init_rng = make_stream(cfg.seed, "trainer.init");
        model_.table = init_table(model_.vocab.size(), cfg.dim, init_rng, cfg.init_scale);
        table_state_ = AdamState(model_.vocab.size(), cfg.dim);
        if (cfg.model_kind == ModelKind::bilinear) {
            Rng w_rng = make_stream(cfg.seed, "trainer.bilinear");
            model_.bilinear = init_bilinear(cfg.dim, w_rng, cfg.bilinear_noise);
            bilinear_state_ = AdamState(cfg.dim, cfg.dim);
        }

        if (text_active_) {
            windows_per_pass_ = count_windows(*corpus, model_.vocab, cfg.window);
            if (windows_per_pass_ == 0) throw ConfigError("corpus yields no training windows");
            stream_ = std::make_unique<WindowStream>(*corpus, model_.vocab, cfg.window,
                                                     cfg.subsample > 0 ? &subsample_rng_ : nullptr, cfg.subsample);
        }
        batch_ = SparseGrad(cfg.dim);
        bilinear_grad_.assign(cfg.dim * cfg.dim, 0.0);
    }

    TrainResult run() {
        const auto start = std::chrono::steady_clock::now();
        TrainReport report;
        std::optional<double> best_acc;
        Model best;
        std::optional<OptimizerCheckpoint> best_opt;

        std::vector<std::uint32_t> edge_order(positives_.size());
        std::vector<std::uint32_t> constraint_order(joinmeet_active_ ? constraints_.size() : 0);
        for (int epoch = 1; epoch <= cfg_.epochs; ++epoch) {
            const auto epoch_start = std::chrono::steady_clock::now();
            std::iota(edge_order.begin(), edge_order.end(), 0u);
            shuffle(std::span<std::uint32_t>(edge_order), shuffle_rng_);
            std::iota(constraint_order.begin(), constraint_order.end(), 0u);
            shuffle(std::span<std::uint32_t>(constraint_order), joinmeet_rng_);

            std::vector<Slot> plan = text_active_
                                         ? interleave_schedule(edge_order.size(), windows_per_pass_, cfg_.text_ratio)
                                         : interleave_schedule(edge_order.size(), 0, 1.0);
            interleave_extra(plan, SlotKind::constraint, constraint_order.size());

            EpochStats stats;
            stats.epoch = epoch;
            double order_sum = 0, cbow_sum = 0, jm_sum = 0;
            std::size_t edges_in_batch = 0;
            std::size_t step = 0;
            for (std::size_t k = 0; k < plan.size(); ++k) {
                const Slot& s = plan[k];
                double v = 0;
                switch (s.kind) {
                    case SlotKind::edge:
                        v = edge_sample(positives_[edge_order[s.index]]);
                        order_sum += v;
                        ++stats.edges;
                        ++edges_in_batch;
                        break;
                    case SlotKind::window:
                        v = window_sample();
                        cbow_sum += v;
                        ++stats.windows;
                        break;
                    case SlotKind::constraint:
                        v = constraint_sample(constraints_[constraint_order[s.index]]);
                        jm_sum += v;
                        ++stats.constraints;
                        break;
                }
                if (!std::isfinite(v))
                    throw NonFiniteError("non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                                         std::to_string(step));
                const bool last = k + 1 == plan.size();
                const bool next_is_edge = !last && plan[k + 1].kind == SlotKind::edge;
                if (last || (edges_in_batch >= cfg_.batch_size && next_is_edge)) {
                    apply_step(epoch, step++);
                    edges_in_batch = 0;
                }
            }
            stats.order_loss = stats.edges ? order_sum / static_cast<double>(stats.edges) : 0.0;
            stats.cbow_loss = stats.windows ? cbow_sum / static_cast<double>(stats.windows) : 0.0;
            stats.joinmeet_loss = stats.constraints ? jm_sum / static_cast<double>(stats.constraints) : 0.0;

            if (dev_ && !dev_->empty()) {
                PairScores sc = score_pairs(model_, *dev_, Exec::serial);
                if (!sc.scores.empty()) {
                    double acc = tune_threshold(sc.scores, sc.labels, polarity_for(model_.kind)).accuracy;
                    stats.dev_accuracy = acc;
                    if (!best_acc || acc > *best_acc) {
                        best_acc = acc;
                        report.best_epoch = epoch;
                        best.table = model_.table;
                        best.bilinear = model_.bilinear;
                        if (cfg_.checkpoint_optimizer) best_opt = checkpoint();
                    }
                }
            }
            stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_start).count();
            if (log_) print_epoch(stats, *log_);
            report.epochs.push_back(stats);
        }

        if (report.best_epoch) {
            model_.table = std::move(best.table);
            model_.bilinear = std::move(best.bilinear);
            if (cfg_.checkpoint_optimizer) model_.optimizer = std::move(best_opt);
        } else if (cfg_.checkpoint_optimizer) {
            model_.optimizer = checkpoint();
        }
        report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return {std::move(model_), std::move(report)};
    }

   private:
    OptimizerCheckpoint checkpoint() const { return {table_state_, bilinear_state_}; }

    Vec lookup(const PhraseRef& p) const { return lookup_phrase(model_.table, p); }

    void scatter(const PhraseRef& p, const Vec& g, double weight) { gradient_accumulate_phrase(p, g, batch_, weight); }

    double edge_sample(const TripletEdge& e) {
        const PhraseRef& cp = phrases_[e.child];
        const PhraseRef& pp = phrases_[e.parent];
        Vec x = lookup(cp), y = lookup(pp);
        double total = 0;
        for (int k = 0; k < cfg_.negatives; ++k) {
            std::pair<ConceptId, ConceptId> neg;
            if (cfg_.free_pair_negatives) {
                neg = sample_free_pair(reach_, neg_rng_, cfg_.negative_retries);
            } else {
                neg = sample_negative_either(reach_, neg_rng_, e,
                                           corrupt_parent_next_ ? CorruptSide::parent : CorruptSide::child,
                                           cfg_.negative_retries);
                corrupt_parent_next_ = !corrupt_parent_next_;
            }
            const PhraseRef& ncp = phrases_[neg.first];
            const PhraseRef& npp = phrases_[neg.second];
            Vec xn = lookup(ncp), yn = lookup(npp);
            if (model_.kind == ModelKind::order) {
                VectorLoss l = order_margin_loss(x, y, xn, yn, cfg_.margin_order);
                total += l.value;
                if (l.active() && order_active_) {
                    scatter(cp, l.grads[0], cfg_.alpha1);
                    scatter(pp, l.grads[1], cfg_.alpha1);
                    scatter(ncp, l.grads[2], cfg_.alpha1);
                    scatter(npp, l.grads[3], cfg_.alpha1);
                }
            } else {
                BilinearLoss l = bilinear_margin_loss(x, y, xn, yn, *model_.bilinear, cfg_.margin_order);
                total += l.vectors.value;
                if (l.vectors.active() && order_active_) {
                    scatter(cp, l.vectors.grads[0], cfg_.alpha1);
                    scatter(pp, l.vectors.grads[1], cfg_.alpha1);
                    scatter(ncp, l.vectors.grads[2], cfg_.alpha1);
                    scatter(npp, l.vectors.grads[3], cfg_.alpha1);
                    for (std::size_t i = 0; i < l.weights.size(); ++i) bilinear_grad_[i] += cfg_.alpha1 * l.weights[i];
                    bilinear_touched_ = true;
                }
            }
        }
        return total;
    }

    TokenId random_token(TokenId avoid) {
        const std::size_t n = model_.vocab.size();
        TokenId t = static_cast<TokenId>(uniform_index(cbow_rng_, n));
        for (int tries = 0; tries < 10 && t == avoid && n > 1; ++tries)
            t = static_cast<TokenId>(uniform_index(cbow_rng_, n));
        return t;
    }

    double window_sample() {
        if (!stream_->next(window_)) {
            stream_->rewind();
            if (!stream_->next(window_)) throw ConfigError("corpus yields no training windows");
        }
        PhraseRef target{{window_.target}};
        PhraseRef context{window_.context};
        PhraseRef neg_target{{random_token(window_.target)}};
        PhraseRef neg_context = context;
        if (cfg_.corrupt_both_cbow)
            for (auto& t : neg_context.tokens) t = random_token(t);
        Vec v1 = lookup(target), v2 = lookup(context), n1 = lookup(neg_target);
        Vec n2 = cfg_.corrupt_both_cbow ? lookup(neg_context) : v2;
        VectorLoss l = cbow_l1_loss(v1, v2, n1, n2, cfg_.margin_cbow);
        if (l.active()) {
            scatter(target, l.grads[0], cfg_.alpha2);
            scatter(context, l.grads[1], cfg_.alpha2);
            scatter(neg_target, l.grads[2], cfg_.alpha2);
            scatter(neg_context, l.grads[3], cfg_.alpha2);
        }
        return l.value;
    }

    double constraint_sample(const JoinMeetConstraint& c) {
        const double w = cfg_.joinmeet_weight();
        const PhraseRef& p1 = phrases_[c.w1];
        const PhraseRef& p2 = phrases_[c.w2];
        const PhraseRef& pw = phrases_[c.witness];
        Vec w1 = lookup(p1), w2 = lookup(p2), wit = lookup(pw);
        const bool join = c.kind == ConstraintKind::common_child;
        VectorLoss l;
        const PhraseRef* neg = nullptr;
        if (cfg_.joinmeet_margin_variant) {
            auto r = static_cast<ConceptId>(uniform_index(joinmeet_rng_, g_.num_concepts()));
            if (r == c.witness) r = static_cast<ConceptId>((r + 1) % g_.num_concepts());
            neg = &phrases_[r];
            Vec nw = lookup(*neg);
            l = join ? join_margin_loss(w1, w2, wit, nw, cfg_.margin_joinmeet)
                     : meet_margin_loss(w1, w2, wit, nw, cfg_.margin_joinmeet);
        } else {
            l = join ? join_penalty(w1, w2, wit) : meet_penalty(w1, w2, wit);
        }
        if (l.active()) {
            scatter(p1, l.grads[0], w);
            scatter(p2, l.grads[1], w);
            scatter(pw, l.grads[2], w);
            if (neg) scatter(*neg, l.grads[3], w);
        }
        return l.value;
    }

    void apply_step(int epoch, std::size_t step) {
        try {
            if (!batch_.empty()) {
                adam_step(adam_, table_state_, model_.table.view(), batch_);
                if (model_.kind == ModelKind::order) project_nonneg(model_.table, batch_.rows());
            }
            if (bilinear_touched_) {
                SparseGrad wg(cfg_.dim);
                for (std::uint32_t r = 0; r < cfg_.dim; ++r)
                    wg.add(r, std::span<const double>(bilinear_grad_).subspan(r * cfg_.dim, cfg_.dim));
                adam_step(adam_, *bilinear_state_, model_.bilinear->view(), wg);
                std::fill(bilinear_grad_.begin(), bilinear_grad_.end(), 0.0);
                bilinear_touched_ = false;
            }
        } catch (const NonFiniteError& e) {
            throw NonFiniteError(std::string(e.what()) + " at epoch " + std::to_string(epoch) + ", step " +
                                 std::to_string(step));
        }
        batch_.clear();
    }

    const OntologyGraph& g_;
    std::span<const JoinMeetConstraint> constraints_;
    TrainConfig cfg_;
    const LabeledPairSet* dev_;
    std::ostream* log_;

    Rng shuffle_rng_, neg_rng_, cbow_rng_, joinmeet_rng_, subsample_rng_;
    bool text_active_ = false, joinmeet_active_ = false, order_active_ = true;
    bool corrupt_parent_next_ = true;
    AdamConfig adam_;
    Reachability reach_;
    std::vector<TripletEdge> positives_;
    std::vector<PhraseRef> phrases_;
    Model model_;
    AdamState table_state_;
    std::optional<AdamState> bilinear_state_;
    std::unique_ptr<WindowStream> stream_;
    std::size_t windows_per_pass_ = 0;
    TokenWindow window_;
    SparseGrad batch_;
    std::vector<double> bilinear_grad_;
    bool bilinear_touched_ = false;
};

}  // namespace

TrainResult train(const OntologyGraph& g, const std::optional<std::filesystem::path>& corpus,
                  std::span<const JoinMeetConstraint> constraints, const TrainConfig& cfg, const LabeledPairSet* dev,
                  std::ostream* log) {
    Trainer t(g, corpus, constraints, cfg, dev, log);
    return t.run();
}

void print_epoch(const EpochStats& s, std::ostream& out) {
    auto prec = out.precision(6);
    out << "epoch=" << s.epoch << " order_loss=" << s.order_loss << " cbow_loss=" << s.cbow_loss
        << " joinmeet_loss=" << s.joinmeet_loss << " edges=" << s.edges << " windows=" << s.windows
        << " constraints=" << s.constraints;
    if (s.dev_accuracy) out << " dev_accuracy=" << *s.dev_accuracy;
    out << " seconds=" << s.seconds << '\n';
    out.precision(prec);
}

void print_summary(const TrainReport& r, std::ostream& out) {
    out << "== training summary ==\n";
    out << "epochs=" << r.epochs.size() << '\n';
    if (!r.epochs.empty()) {
        const auto& last = r.epochs.back();
        out << "final_order_loss=" << last.order_loss << '\n'
            << "final_cbow_loss=" << last.cbow_loss << '\n'
            << "final_joinmeet_loss=" << last.joinmeet_loss << '\n';
    }
    if (r.best_epoch) {
        out << "best_epoch=" << *r.best_epoch << '\n';
        out << "best_dev_accuracy=" << *r.epochs[static_cast<std::size_t>(*r.best_epoch - 1)].dev_accuracy << '\n';
    }
    out << "wall_seconds=" << r.wall_seconds << '\n';
}

}  // namespace oe
