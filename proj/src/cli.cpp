#include "oe/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oe/error.hpp"
#include "oe/evaluator.hpp"
#include "oe/lattice.hpp"
#include "oe/model.hpp"
#include "oe/ontology.hpp"
#include "oe/synth.hpp"
#include "oe/trainer.hpp"

namespace fs = std::filesystem;

namespace oe::cli {

namespace {

void set_threads(int threads) {
    if (threads < 1) throw ConfigError("--threads must be >= 1");
#ifdef _OPENMP
    omp_set_num_threads(threads);
#endif
}

Exec exec_for(int threads) { return threads > 1 ? Exec::parallel : Exec::serial; }

IngestResult load_graph(const fs::path& file, const std::string& relation, std::ostream& err) {
    IngestResult r = ingest_triplets(file, relation);
    for (const auto& issue : r.malformed)
        err << "warning: " << file.string() << ":" << issue.line << ": " << issue.message << '\n';
    if (r.cycles_dropped) err << "warning: dropped " << r.cycles_dropped << " cycle-closing edge(s)\n";
    if (r.duplicates_dropped) err << "warning: dropped " << r.duplicates_dropped << " duplicate edge(s)\n";
    if (r.self_loops_dropped) err << "warning: dropped " << r.self_loops_dropped << " self loop(s)\n";
    return r;
}

template <class F>
void with_output(const std::optional<fs::path>& path, std::ostream& fallback, F&& f) {
    if (!path) {
        f(fallback);
        return;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path->string());
    f(file);
    if (!file) throw IoError("write failed for " + path->string());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Order embeddings for Is-A hierarchies", args.empty() ? "oe" : args[0]};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    int threads = 1;
    std::string relation = "IsA";

    // closure
    auto* closure = app.add_subcommand("closure", "Transitive closure of a triplet file");
    fs::path closure_in;
    std::optional<fs::path> closure_out;
    bool closure_prov = false;
    closure->add_option("--input,-i", closure_in, "Triplet TSV")->required()->check(CLI::ExistingFile);
    closure->add_option("--output,-o", closure_out, "Output TSV (default: stdout)");
    closure->add_flag("--provenance", closure_prov, "Append a provenance column");
    closure->add_option("--relation", relation, "Relation to keep");
    closure->add_option("--threads", threads, "Worker threads");

    // reduce
    auto* reduce = app.add_subcommand("reduce", "Transitive reduction of a triplet file");
    fs::path reduce_in;
    std::optional<fs::path> reduce_out;
    bool reduce_prov = false;
    reduce->add_option("--input,-i", reduce_in, "Triplet TSV")->required()->check(CLI::ExistingFile);
    reduce->add_option("--output,-o", reduce_out, "Output TSV (default: stdout)");
    reduce->add_flag("--provenance", reduce_prov, "Append a provenance column");
    reduce->add_option("--relation", relation, "Relation to keep");
    reduce->add_option("--threads", threads, "Worker threads");

    // mine
    auto* mine = app.add_subcommand("mine", "Mine join/meet constraints");
    fs::path mine_in;
    std::optional<fs::path> mine_out;
    std::size_t max_pairs = 1000000;
    std::uint64_t mine_seed = 42;
    mine->add_option("--input,-i", mine_in, "Triplet TSV")->required()->check(CLI::ExistingFile);
    mine->add_option("--output,-o", mine_out, "Constraint TSV (default: stdout)");
    mine->add_option("--max-pairs", max_pairs, "Candidate pair budget");
    mine->add_option("--seed", mine_seed, "Seed for pair sampling");
    mine->add_option("--relation", relation, "Relation to keep");
    mine->add_option("--threads", threads, "Worker threads");

    // synth
    auto* synth = app.add_subcommand("synth", "Write a seeded synthetic ontology with splits");
    fs::path synth_dir;
    int tree_depth = 0, branching = 2;
    std::size_t dag_nodes = 0, corpus_bytes = 0;
    double edge_prob = 0.1, train_fraction = 0.5;
    std::uint64_t synth_seed = 42;
    synth->add_option("--out-dir", synth_dir, "Output directory")->required();
    auto* depth_opt = synth->add_option("--tree-depth", tree_depth, "Balanced tree depth (edge levels)");
    synth->add_option("--branching", branching, "Tree branching factor");
    auto* dag_opt = synth->add_option("--dag-nodes", dag_nodes, "Random DAG node count");
    synth->add_option("--edge-prob", edge_prob, "Random DAG edge probability");
    synth->add_option("--train-fraction", train_fraction, "Share of non-reduction closure edges kept for training");
    synth->add_option("--corpus-bytes", corpus_bytes, "Also write a sibling co-occurrence corpus of this size");
    synth->add_option("--seed", synth_seed, "Seed");
    depth_opt->excludes(dag_opt);

    // train
    auto* trainc = app.add_subcommand("train", "Train an order-embedding or bilinear model");
    fs::path train_in, model_out;
    std::optional<fs::path> corpus, constraints_file, dev_file, config_file, report_file;
    trainc->add_option("--train", train_in, "Training triplet TSV")->required()->check(CLI::ExistingFile);
    trainc->add_option("--out,-o", model_out, "Model file")->required();
    trainc->add_option("--corpus", corpus, "Text corpus (plain or gzip)")->check(CLI::ExistingFile);
    trainc->add_option("--constraints", constraints_file, "Join/meet constraint TSV")->check(CLI::ExistingFile);
    trainc->add_option("--dev", dev_file, "Labeled dev pairs for model selection")->check(CLI::ExistingFile);
    trainc->add_option("--config", config_file, "key=value config file")->check(CLI::ExistingFile);
    trainc->add_option("--report", report_file, "Write the training report here instead of stderr");
    trainc->add_option("--relation", relation, "Relation to keep");
    trainc->add_option("--threads", threads, "Worker threads");
    std::map<std::string, std::string> overrides;
    const auto defaults = describe(TrainConfig{});
    for (const auto& [key, value] : defaults) {
        auto* opt = trainc->add_option("--" + key, overrides[key], "default " + value);
        if (value == "true" || value == "false") opt->expected(0, 1)->default_str("")->default_val("");
    }

    // eval
    auto* evalc = app.add_subcommand("eval", "Evaluate a model on labeled pairs");
    fs::path eval_model, eval_test;
    std::optional<fs::path> eval_dev;
    std::optional<double> eval_threshold;
    bool eval_kv = false;
    evalc->add_option("--model,-m", eval_model, "Model file")->required()->check(CLI::ExistingFile);
    evalc->add_option("--test", eval_test, "Labeled test pairs")->required()->check(CLI::ExistingFile);
    auto* dev_opt = evalc->add_option("--dev", eval_dev, "Labeled dev pairs for threshold tuning")->check(CLI::ExistingFile);
    auto* thr_opt = evalc->add_option("--threshold", eval_threshold, "Fixed decision threshold");
    evalc->add_flag("--kv", eval_kv, "Machine-readable key=value output");
    evalc->add_option("--threads", threads, "Worker threads");
    dev_opt->excludes(thr_opt);

    // export
    auto* exportc = app.add_subcommand("export", "Dump embeddings as TSV");
    fs::path export_model;
    std::optional<fs::path> export_out;
    exportc->add_option("--model,-m", export_model, "Model file")->required()->check(CLI::ExistingFile);
    exportc->add_option("--output,-o", export_out, "Output TSV (default: stdout)");

    // CLI11 consumes a reversed argument list without the program name.
    std::vector<std::string> rev(args.rbegin(), args.empty() ? args.rend() : args.rend() - 1);
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        std::string msg = e.what();
        for (char& c : msg)
            if (c == '\n') c = ' ';
        err << "error: usage: " << msg << '\n';
        return 2;
    }

    try {
        set_threads(threads);
        const Exec exec = exec_for(threads);

        if (closure->parsed()) {
            IngestResult r = load_graph(closure_in, relation, err);
            OntologyGraph c = transitive_closure(r.graph);
            with_output(closure_out, out, [&](std::ostream& os) { write_triplets(c, os, closure_prov); });
            err << "edges=" << r.graph.num_edges() << " closure_edges=" << c.num_edges() << '\n';
        } else if (reduce->parsed()) {
            IngestResult r = load_graph(reduce_in, relation, err);
            OntologyGraph red = transitive_reduction(r.graph);
            with_output(reduce_out, out, [&](std::ostream& os) { write_triplets(red, os, reduce_prov); });
            err << "edges=" << r.graph.num_edges() << " reduction_edges=" << red.num_edges() << '\n';
        } else if (mine->parsed()) {
            IngestResult r = load_graph(mine_in, relation, err);
            Reachability reach = compute_reachability(r.graph);
            Rng rng = make_stream(mine_seed, "mine.pairs");
            auto cs = mine_constraints(reach, max_pairs, rng, exec);
            with_output(mine_out, out, [&](std::ostream& os) { emit_constraints(cs, r.graph.concepts(), os); });
            auto counts = count_by_kind(cs);
            std::ostream& report = mine_out ? out : err;
            report << "common_child=" << counts.common_child << '\n' << "common_parent=" << counts.common_parent << '\n';
        } else if (synth->parsed()) {
            if ((tree_depth > 0) == (dag_nodes > 0)) throw ConfigError("synth needs exactly one of --tree-depth or --dag-nodes");
            OntologyGraph full;
            if (tree_depth > 0) {
                full = synth::balanced_tree(tree_depth, branching);
            } else {
                Rng dag_rng = make_stream(synth_seed, "synth.dag");
                full = synth::random_dag(dag_nodes, edge_prob, dag_rng);
                if (full.num_edges() == 0) throw EmptyOntology("random DAG has no edges; raise --edge-prob");
            }
            synth::Split split = synth::make_split(full, train_fraction, synth_seed);
            fs::create_directories(synth_dir);
            write_triplets(full, synth_dir / "full.tsv");
            write_triplets(split.train, synth_dir / "train.tsv");
            write_labeled_pairs(split.dev, synth_dir / "dev.tsv");
            write_labeled_pairs(split.test, synth_dir / "test.tsv");
            if (corpus_bytes > 0) {
                Rng text_rng = make_stream(synth_seed, "synth.corpus");
                std::ofstream cf(synth_dir / "corpus.txt", std::ios::binary);
                if (!cf) throw IoError("cannot write corpus");
                synth::write_sibling_corpus(full, corpus_bytes, text_rng, cf);
            }
            out << "concepts=" << full.num_concepts() << '\n'
                << "edges=" << full.num_edges() << '\n'
                << "closure_edges=" << split.full_closure.num_edges() << '\n'
                << "train_edges=" << split.train.num_edges() << '\n'
                << "dev_pairs=" << split.dev.size() << '\n'
                << "test_pairs=" << split.test.size() << '\n';
        } else if (trainc->parsed()) {
            TrainConfig cfg;
            if (config_file) apply_config_file(cfg, *config_file);
            for (const auto& [key, value] : overrides) {
                if (trainc->count("--" + key) == 0) continue;
                const bool is_bool = defaults.at(key) == "true" || defaults.at(key) == "false";
                apply_setting(cfg, key, value.empty() && is_bool ? "true" : value);
            }
            IngestResult r = load_graph(train_in, relation, err);
            std::vector<JoinMeetConstraint> cs;
            if (constraints_file) cs = parse_constraints(*constraints_file, r.graph.concepts());
            std::optional<LabeledPairSet> dev;
            if (dev_file) dev = read_labeled_pairs(*dev_file);
            std::optional<std::ofstream> report_stream;
            std::ostream* log = &err;
            if (report_file) {
                report_stream.emplace(*report_file);
                if (!*report_stream) throw IoError("cannot write " + report_file->string());
                log = &*report_stream;
            }
            for (const auto& [key, value] : describe(cfg)) *log << "config " << key << '=' << value << '\n';
            TrainResult res = train(r.graph, cfg.use_text ? corpus : std::nullopt, cs, cfg,
                                    dev ? &*dev : nullptr, log);
            print_summary(res.report, *log);
            save_model(res.model, model_out);
        } else if (evalc->parsed()) {
            Model model = load_model(eval_model);
            LabeledPairSet test = read_labeled_pairs(eval_test);
            double threshold = 0.0;
            if (eval_dev) {
                threshold = tune_threshold(model, read_labeled_pairs(*eval_dev), exec).threshold;
            } else if (eval_threshold) {
                threshold = *eval_threshold;
            } else {
                throw ConfigError("eval needs --dev or --threshold");
            }
            EvalReport rep = evaluate(model, test, threshold, exec);
            if (eval_kv) print_report_kv(rep, out);
            else print_report(rep, out);
        } else if (exportc->parsed()) {
            Model model = load_model(export_model);
            with_output(export_out, out, [&](std::ostream& os) { export_tsv(model, os); });
        }
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace oe::cli
