// prereqx: mine prerequisite relations between concepts from a structured
// textbook corpus plus per-concept wiki pages.
//
// Commands: resolve, matrix, features, train, predict, eval-stat,
// eval-supervised, sweep, export. See --help for flags.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "prereqx/features_io.hpp"
#include "prereqx/prereqx.hpp"

namespace fs = std::filesystem;
using namespace prereqx;

namespace {

struct CommonArgs {
    std::string corpus_dir;
    std::string out_dir = ".";
    std::uint32_t seed = 42;
    std::size_t k_folds = 5;
    bool no_ordering = false;
    bool single_pass_closure = false;
    bool flip_pairs = false;
    bool no_stratify = false;
    std::string embeddings_path;
    std::optional<std::string> domain;
};

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

LoadedCorpus load(const CommonArgs& args) {
    LoadOptions options;
    options.flip_pairs = args.flip_pairs;
    LoadedCorpus corpus = load_corpus(args.corpus_dir, options);
    print_warnings(corpus.warnings);
    std::cerr << "loaded: " << corpus.counts.concepts << " concepts, " << corpus.counts.sections
              << " sections, " << corpus.counts.synonyms << " synonyms, "
              << corpus.counts.wiki_pages << " wiki pages, " << corpus.counts.link_edges
              << " link edges, " << corpus.counts.pairs << " pairs ("
              << corpus.counts.positive_pairs << " positive)\n";
    return corpus;
}

PipelineOptions pipeline_options(const CommonArgs& args) {
    PipelineOptions options;
    options.ordering = !args.no_ordering;
    options.closure = args.single_pass_closure ? ClosureMode::SinglePass : ClosureMode::Fixpoint;
    return options;
}

nlohmann::json placements_json(const PipelineResult& pipeline, bool with_content) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : pipeline.resolved.placements) {
        nlohmann::json entry = {{"concept", p.concept_id},
                                {"rho", p.rho ? nlohmann::json(p.rho->str()) : nlohmann::json()},
                                {"basic", p.basic},
                                {"rank", pipeline.resolved.ranks.at(p.concept_id)}};
        if (with_content) entry["sigma"] = p.sigma;
        out.push_back(entry);
    }
    return out;
}

std::string pr_curve_csv(const std::vector<PrCurvePoint>& points) {
    std::string out = "recall,precision\n";
    for (const auto& p : points)
        out += format_double(p.recall) + "," + format_double(p.precision) + "\n";
    return out;
}

FeatureTable extract_features(const LoadedCorpus& corpus, const CommonArgs& args) {
    if (corpus.pairs.empty()) throw Error("feature extraction requires pairs.csv");
    PipelineResult pipeline = build_pipeline(corpus, pipeline_options(args));

    std::map<std::string, std::string> pages;
    for (const auto& [id, page] : corpus.wiki)
        pages[id] = normalize_text(page.text, corpus.synonyms);

    std::optional<EmbeddingTable> embeddings;
    if (!args.embeddings_path.empty()) embeddings = EmbeddingTable::load(args.embeddings_path);

    FeatureExtractor extractor(corpus.concepts.ids(), corpus.links, pages, &pipeline.final_matrix,
                               &pipeline.resolved.ranks, embeddings ? &*embeddings : nullptr);
    FeatureTable table = extractor.extract(corpus.pairs);
    print_warnings(table.warnings);
    return table;
}

int run_app(int argc, char** argv) {
    CLI::App app{"prerequisite relation mining from textbook corpora"};
    app.require_subcommand(1);
    CommonArgs args;

    std::string model_name = "rf";
    std::string features_set;
    std::string in_path;
    std::string model_file = "model.json";
    double theta = 0.06;
    bool theta_given = false;
    bool with_content = false;
    double c_param = 1.0;
    int trees = 200;

    auto add_common = [&](CLI::App* cmd, bool needs_corpus = true) {
        auto* corpus_opt = cmd->add_option("--corpus", args.corpus_dir, "corpus directory");
        if (needs_corpus) corpus_opt->required();
        cmd->add_option("--out", args.out_dir, "output directory (default .)");
        cmd->add_option("--seed", args.seed, "random seed (default 42)");
        cmd->add_flag("--flip-pairs", args.flip_pairs, "swap target/candidate columns of pairs.csv");
    };
    auto add_pipeline_flags = [&](CLI::App* cmd) {
        cmd->add_flag("--no-ordering", args.no_ordering, "skip the concept-ordering filter");
        cmd->add_flag("--single-pass-closure", args.single_pass_closure,
                      "one closure sweep instead of the fixpoint");
    };
    auto add_eval_flags = [&](CLI::App* cmd) {
        cmd->add_option("--k-folds", args.k_folds, "cross-validation folds (default 5)");
        cmd->add_flag("--no-stratify", args.no_stratify, "plain random folds");
        cmd->add_option("--domain", [&](const CLI::results_t& r) {
            args.domain = r.front();
            return true;
        }, "domain name for reference comparison (geometry|physics|precalculus)");
    };

    auto* resolve_cmd = app.add_subcommand("resolve", "resolve concept placements");
    add_common(resolve_cmd);
    resolve_cmd->add_flag("--with-content", with_content, "include section content in placements.json");

    auto* matrix_cmd = app.add_subcommand("matrix", "build the prerequisite matrix");
    add_common(matrix_cmd);
    add_pipeline_flags(matrix_cmd);

    auto* features_cmd = app.add_subcommand("features", "extract pair features to features.csv");
    add_common(features_cmd);
    add_pipeline_flags(features_cmd);
    features_cmd->add_option("--embeddings", args.embeddings_path,
                             "word embedding file (word SPACE floats per line)");

    auto* train_cmd = app.add_subcommand("train", "train a classifier on a features.csv");
    train_cmd->add_option("--in", in_path, "input features.csv")->required();
    train_cmd->add_option("--out", args.out_dir, "output directory (default .)");
    train_cmd->add_option("--model", model_name, "model kind: rf|svm|lr|nb (default rf)");
    train_cmd->add_option("--seed", args.seed, "random seed (default 42)");
    train_cmd->add_option("--c", c_param, "inverse regularization for lr/svm (default 1.0)");
    train_cmd->add_option("--trees", trees, "random forest size (default 200)");
    train_cmd->add_option("--features", features_set, "feature set: gtc|proposed|book-only");

    auto* predict_cmd = app.add_subcommand("predict", "predict with a trained model");
    predict_cmd->add_option("--in", in_path, "input features.csv")->required();
    predict_cmd->add_option("--model-file", model_file, "trained model.json (default model.json)");
    predict_cmd->add_option("--out", args.out_dir, "output directory (default .)");

    auto* eval_stat_cmd = app.add_subcommand("eval-stat", "cross-validated statistical evaluation");
    add_common(eval_stat_cmd);
    add_pipeline_flags(eval_stat_cmd);
    add_eval_flags(eval_stat_cmd);

    auto* eval_sup_cmd = app.add_subcommand("eval-supervised", "cross-validated supervised evaluation");
    add_common(eval_sup_cmd, false);
    add_pipeline_flags(eval_sup_cmd);
    add_eval_flags(eval_sup_cmd);
    eval_sup_cmd->add_option("--in", in_path, "reuse an existing features.csv instead of --corpus");
    eval_sup_cmd->add_option("--model", model_name, "model kind or 'all' (default all)")
        ->default_val("all");
    eval_sup_cmd->add_option("--features", features_set, "restrict to one feature set");
    eval_sup_cmd->add_option("--embeddings", args.embeddings_path, "word embedding file");
    eval_sup_cmd->add_option("--c", c_param, "inverse regularization for lr/svm (default 1.0)");
    eval_sup_cmd->add_option("--trees", trees, "random forest size (default 200)");

    auto* sweep_cmd = app.add_subcommand("sweep", "precision/recall over the theta grid");
    add_common(sweep_cmd);
    add_pipeline_flags(sweep_cmd);

    auto* export_cmd = app.add_subcommand("export", "export the prerequisite DAG");
    add_common(export_cmd);
    add_pipeline_flags(export_cmd);
    export_cmd->add_option("--theta", theta, "edge threshold")->each([&](const std::string&) {
        theta_given = true;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return 2;
    }

    fs::path out_dir(args.out_dir);

    if (resolve_cmd->parsed()) {
        LoadedCorpus corpus = load(args);
        PipelineOptions options;  // placements are stage-independent
        PipelineResult pipeline = build_pipeline(corpus, options);
        print_warnings(pipeline.resolved.warnings);
        write_file(out_dir / "placements.json", placements_json(pipeline, with_content).dump(2) + "\n");
        std::cout << "wrote " << (out_dir / "placements.json").string() << "\n";
        return 0;
    }

    if (matrix_cmd->parsed()) {
        LoadedCorpus corpus = load(args);
        PipelineResult pipeline = build_pipeline(corpus, pipeline_options(args));
        print_warnings(pipeline.resolved.warnings);
        const PrereqMatrix& m = pipeline.final_matrix;
        nlohmann::json j = {{"concepts", m.concepts}, {"stage", to_string(m.stage)}, {"values", m.values}};
        write_file(out_dir / "matrix.json", j.dump() + "\n");
        std::cout << "wrote " << (out_dir / "matrix.json").string() << " (stage "
                  << to_string(m.stage) << ")\n";
        return 0;
    }

    if (features_cmd->parsed()) {
        LoadedCorpus corpus = load(args);
        FeatureTable table = extract_features(corpus, args);
        write_file(out_dir / "features.csv", features_to_csv(table));
        std::cout << "wrote " << (out_dir / "features.csv").string() << " (" << table.rows.size()
                  << " rows, " << table.schema.size() << " features)\n";
        return 0;
    }

    if (train_cmd->parsed()) {
        FeatureTable table = features_from_csv(in_path);
        std::vector<std::string> names =
            features_set.empty() ? table.schema
                                 : select_feature_names(table, feature_set_from_string(features_set));
        TrainConfig config;
        config.kind = model_kind_from_string(model_name);
        config.seed = args.seed;
        config.c = c_param;
        config.trees = trees;
        TrainedClassifier model = train_on_table(table, names, config);
        write_file(out_dir / "model.json", model.to_json().dump() + "\n");
        std::cout << "wrote " << (out_dir / "model.json").string() << " ("
                  << to_string(config.kind) << ", " << names.size() << " features)\n";
        return 0;
    }

    if (predict_cmd->parsed()) {
        FeatureTable table = features_from_csv(in_path);
        nlohmann::json mj = nlohmann::json::parse(detail::read_file(model_file));
        TrainedClassifier model = TrainedClassifier::from_json(mj);
        std::vector<std::size_t> cols;
        for (const auto& name : model.schema()) cols.push_back(table.column(name));
        std::vector<std::vector<double>> x;
        for (const auto& row : table.rows) {
            std::vector<double> r;
            r.reserve(cols.size());
            for (std::size_t c : cols) r.push_back(row.values[c]);
            x.push_back(std::move(r));
        }
        Predictions pred = model.predict(x, model.schema());
        std::string csv = "target,candidate,label,score\n";
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            csv += table.rows[i].target + "," + table.rows[i].candidate + "," +
                   std::to_string(pred.labels[i]) + "," + format_double(pred.scores[i]) + "\n";
        }
        write_file(out_dir / "predictions.csv", csv);
        std::cout << "wrote " << (out_dir / "predictions.csv").string() << "\n";
        return 0;
    }

    if (eval_stat_cmd->parsed()) {
        LoadedCorpus corpus = load(args);
        StatOptions options;
        options.ordering = !args.no_ordering;
        options.closure = args.single_pass_closure ? ClosureMode::SinglePass : ClosureMode::Fixpoint;
        options.k = args.k_folds;
        options.seed = args.seed;
        options.stratified = !args.no_stratify;
        StatReport report = run_statistical(corpus, options);
        write_file(out_dir / "report.json", stat_report_to_json(report, args.domain).dump(2) + "\n");
        write_file(out_dir / "prcurve.csv", pr_curve_csv(report.proposed.curve));
        std::cout << "proposed_statistical: P=" << report.proposed.averaged.precision
                  << " R=" << report.proposed.averaged.recall << " F1=" << report.proposed.averaged.f1
                  << " AUPRC=" << report.proposed.auprc_pooled
                  << " theta_full=" << report.proposed.theta_full << "\n";
        if (report.refd_equal)
            std::cout << "refd_equal: F1=" << report.refd_equal->averaged.f1
                      << " AUPRC=" << report.refd_equal->auprc_pooled << "\n";
        if (report.refd_tfidf)
            std::cout << "refd_tfidf: F1=" << report.refd_tfidf->averaged.f1
                      << " AUPRC=" << report.refd_tfidf->auprc_pooled << "\n";
        std::cout << "wrote " << (out_dir / "report.json").string() << ", "
                  << (out_dir / "prcurve.csv").string() << "\n";
        return 0;
    }

    if (eval_sup_cmd->parsed()) {
        FeatureTable table;
        if (!in_path.empty()) {
            table = features_from_csv(in_path);
        } else {
            if (args.corpus_dir.empty()) throw Error("eval-supervised needs --corpus or --in");
            LoadedCorpus corpus = load(args);
            table = extract_features(corpus, args);
        }
        SupervisedOptions options;
        options.k = args.k_folds;
        options.seed = args.seed;
        options.stratified = !args.no_stratify;
        options.base_config.c = c_param;
        options.base_config.trees = trees;
        if (model_name != "all") options.models = {model_kind_from_string(model_name)};
        if (!features_set.empty()) options.sets = {feature_set_from_string(features_set)};
        SupervisedReport report = run_supervised(table, options);
        write_file(out_dir / "report.json", supervised_report_to_json(report, args.domain).dump(2) + "\n");
        for (const auto& cell : report.cells)
            std::cout << to_string(cell.set) << " / " << to_string(cell.kind)
                      << ": P=" << cell.averaged.precision << " R=" << cell.averaged.recall
                      << " F1=" << cell.averaged.f1 << " AUPRC=" << cell.auprc_pooled << "\n";
        std::cout << "wrote " << (out_dir / "report.json").string() << "\n";
        return 0;
    }

    if (sweep_cmd->parsed()) {
        LoadedCorpus corpus = load(args);
        if (corpus.pairs.empty()) throw Error("sweep requires pairs.csv");
        PipelineResult pipeline = build_pipeline(corpus, pipeline_options(args));
        std::vector<double> scores = pair_scores(pipeline.final_matrix, corpus.pairs);
        std::vector<int> labels;
        for (const auto& p : corpus.pairs) labels.push_back(p.label);
        std::string csv = "recall,precision\n";
        for (double t : theta_grid()) {
            std::vector<int> predictions;
            predictions.reserve(scores.size());
            for (double s : scores) predictions.push_back(s > t ? 1 : 0);
            PrfMetrics m = prf(predictions, labels);
            csv += format_double(m.recall) + "," + format_double(m.precision) + "\n";
        }
        write_file(out_dir / "prcurve.csv", csv);
        std::cout << "wrote " << (out_dir / "prcurve.csv").string() << " (51 grid rows)\n";
        return 0;
    }

    if (export_cmd->parsed()) {
        LoadedCorpus corpus = load(args);
        PipelineOptions options = pipeline_options(args);
        if (!options.ordering) throw Error("export requires the ordering filter");
        PipelineResult pipeline = build_pipeline(corpus, options);
        if (!theta_given)
            std::cerr << "notice: no --theta given, using default 0.06; tune on labeled pairs"
                         " with eval-stat for your corpus\n";
        DagDocument dag = export_dag(pipeline.final_matrix, theta);
        write_file(out_dir / "dag.dot", to_dot(dag));
        write_file(out_dir / "dag.json", dag_to_json(dag).dump(2) + "\n");
        std::cout << "wrote " << (out_dir / "dag.dot").string() << ", "
                  << (out_dir / "dag.json").string() << " (" << dag.edges.size() << " edges)\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
