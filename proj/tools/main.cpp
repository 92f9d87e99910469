#include "perconv/dataset.hpp"
#include "perconv/encoder.hpp"
#include "perconv/errors.hpp"
#include "perconv/formula.hpp"
#include "perconv/metrics.hpp"
#include "perconv/model_io.hpp"
#include "perconv/train.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

using namespace perconv;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct GlobalOpts {
    std::uint64_t seed = 0;
    bool quiet = false;
    bool json_out = false;
};

void info(const GlobalOpts& g, const std::string& msg) {
    if (!g.quiet) std::cerr << msg << "\n";
}

int cmd_encode(const GlobalOpts& g, const std::string& formula_text,
               const std::string& representation) {
    Composition c = parse_formula(formula_text);
    if (representation == "relative") c = to_relative(c);
    else if (representation != "absolute")
        throw ConfigError("representation must be absolute or relative");
    std::cout << to_json(encode(c)) << "\n";
    (void)g;
    return kExitOk;
}

struct TrainOpts {
    std::string task = "classify";
    std::string data_path;
    std::string negatives_path;
    int epochs = 200;
    double lr = 1e-4;
    int batch_size = 32;
    std::string periodicity = "on";
    std::string scale = "full";
    std::string model_out;
    std::string history_out;
    int repeats = 1;
    bool skip_bad = false;
};

std::vector<SampleRecord> prepare_records(const TrainOpts& opts, const GlobalOpts& g,
                                          std::uint64_t seed, Task task) {
    CsvLoadOptions load_opts{.skip_bad = opts.skip_bad};
    std::vector<CsvDiagnostic> diags;
    auto data = load_csv(opts.data_path, load_opts, &diags);
    for (const auto& d : diags)
        std::cerr << opts.data_path << ":" << d.line << ": skipped: " << d.reason << "\n";
    if (task == Task::Classify) {
        if (opts.negatives_path.empty())
            throw ConfigError("classification requires --negatives (the non-gapped class CSV)");
        diags.clear();
        auto negatives = load_csv(opts.negatives_path, load_opts, &diags);
        for (const auto& d : diags)
            std::cerr << opts.negatives_path << ":" << d.line << ": skipped: " << d.reason << "\n";
        ClassBalanceStats stats;
        auto records = prepare_classification(data, negatives, seed, &stats);
        info(g, "dataset stats: " + stats.to_json());
        return records;
    }
    return prepare_regression(data);
}

json metrics_json(const EpochRecord& rec) {
    json m;
    if (rec.classification) {
        const auto& c = *rec.classification;
        m = {{"accuracy", c.accuracy}, {"precision", c.precision}, {"recall", c.recall},
             {"f1", c.f1},             {"auc", c.auc ? json(*c.auc) : json()}};
    } else if (rec.regression) {
        m = {{"r_squared", rec.regression->r_squared}, {"rmse", rec.regression->rmse}};
    }
    return m;
}

int cmd_train(const GlobalOpts& g, const TrainOpts& opts) {
    Task task = task_from_name(opts.task);
    Periodicity periodicity = periodicity_from_name(opts.periodicity);
    ScalePreset scale = scale_from_name(opts.scale);

    std::ofstream history;
    if (!opts.history_out.empty()) {
        history.open(opts.history_out);
        if (!history) throw DataError("cannot open history file: " + opts.history_out);
    }

    json repeat_reports = json::array();
    for (int rep = 0; rep < opts.repeats; ++rep) {
        std::uint64_t seed = g.seed + static_cast<std::uint64_t>(rep);
        auto records = prepare_records(opts, g, seed, task);
        SplitDataset dataset = split(records, seed);

        NetworkConfig ncfg = NetworkConfig::make(task, periodicity, scale, seed);
        Network<float> net = Network<float>::build(ncfg);
        TrainConfig tcfg;
        tcfg.task = task;
        tcfg.lr = opts.lr;
        tcfg.epochs = opts.epochs;
        tcfg.batch_size = opts.batch_size;
        tcfg.seed = seed;

        auto on_epoch = [&](const EpochRecord& rec) {
            std::string line = epoch_record_to_json(rec, periodicity);
            if (history) history << line << "\n";
            info(g, line);
        };
        auto result = train(std::move(net), dataset, tcfg, on_epoch);

        if (!opts.model_out.empty()) {
            std::string path = opts.model_out;
            if (opts.repeats > 1) path += "." + std::to_string(rep);
            save_model(result.best_net, path);
        }
        const EpochRecord& last = result.history.back();
        repeat_reports.push_back({{"repeat", rep},
                                  {"seed", seed},
                                  {"final_train_loss", last.train_loss},
                                  {"best_epoch", result.best_epoch},
                                  {"test_metrics", metrics_json(last)}});
    }

    json doc{{"task", opts.task},
             {"periodicity", periodicity_name(periodicity)},
             {"scale", scale_name(scale)},
             {"repeats", repeat_reports}};
    // mean metrics across repeats, mirroring the averaged-score protocol
    json mean = json::object();
    for (const auto& r : repeat_reports)
        for (auto& [k, v] : r.at("test_metrics").items())
            if (v.is_number()) mean[k] = mean.value(k, 0.0) + v.get<double>() / opts.repeats;
    doc["mean_test_metrics"] = mean;
    if (g.json_out) std::cout << doc.dump() << "\n";
    else std::cout << "final test metrics: " << doc["mean_test_metrics"].dump() << "\n";
    return kExitOk;
}

struct EvalOpts {
    std::string model_path;
    std::string data_path;
    std::string roc_out;
    std::string scatter_out;
    double threshold = 0.5;
};

int cmd_evaluate(const GlobalOpts& g, const EvalOpts& opts) {
    Network<float> net = load_model(opts.model_path);
    auto records = load_csv(opts.data_path);
    std::vector<double> outputs, targets;
    std::vector<int> labels;
    for (const auto& rec : records) {
        EncodedSample s = encode_record(rec, Representation::Absolute);
        Array<float> x(Shape{1, 4, 9, 18}, s.input.data);
        Array<float> pred = net.predict(x);
        outputs.push_back(static_cast<double>(pred.data[0]));
        targets.push_back(rec.target);
        labels.push_back(rec.target >= 0.5 ? 1 : 0);
    }

    std::string report;
    if (net.cfg.task == Task::Classify) {
        auto rep = classification_metrics(outputs, labels, opts.threshold);
        report = rep.to_json();
        if (!opts.roc_out.empty()) {
            std::ofstream out(opts.roc_out);
            out << "fpr,tpr\n";
            for (auto [fpr, tpr] : rep.roc_points) out << fpr << "," << tpr << "\n";
        }
    } else {
        auto rep = regression_metrics(outputs, targets);
        report = rep.to_json();
        if (!opts.scatter_out.empty()) {
            std::ofstream out(opts.scatter_out);
            out << "true,pred\n";
            for (auto [t, p] : rep.scatter) out << t << "," << p << "\n";
        }
    }
    std::cout << report << "\n";
    (void)g;
    return kExitOk;
}

int cmd_predict(const GlobalOpts& g, const std::string& model_path, const std::string& formula_text) {
    Network<float> net = load_model(model_path);
    EncodedSample s =
        encode_record(SampleRecord{formula_text, 0.0, SampleSource::Unspecified},
                      Representation::Absolute);
    Array<float> x(Shape{1, 4, 9, 18}, s.input.data);
    float value = net.predict(x).data[0];
    if (g.json_out) {
        json doc{{"formula", formula_text},
                 {"task", task_name(net.cfg.task)},
                 {net.cfg.task == Task::Classify ? "probability" : "band_gap_ev", value}};
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << value << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Band-gap estimation from chemical formulas via a periodic-table "
                 "convolutional network"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--seed", g.seed, "Seed for splits, init, and shuffling")->capture_default_str();
    app.add_flag("--quiet", g.quiet, "Suppress progress output on stderr");
    app.add_flag("--json", g.json_out, "Emit exactly one JSON document on stdout");

    auto* enc = app.add_subcommand("encode", "Encode a formula as the 4x9x18 table tensor");
    std::string formula_text, representation = "absolute";
    enc->add_option("--formula", formula_text, "Chemical formula, e.g. H2O")->required();
    enc->add_option("--representation", representation, "absolute|relative")->capture_default_str();

    auto* tr = app.add_subcommand("train", "Train a classifier or regressor");
    TrainOpts topts;
    tr->add_option("--task", topts.task, "classify|regress")->capture_default_str();
    tr->add_option("--data", topts.data_path, "Gapped-materials CSV")->required();
    tr->add_option("--negatives", topts.negatives_path, "Non-gapped CSV (classification)");
    tr->add_option("--epochs", topts.epochs)->capture_default_str();
    tr->add_option("--lr", topts.lr)->capture_default_str();
    tr->add_option("--batch-size", topts.batch_size)->capture_default_str();
    tr->add_option("--periodicity", topts.periodicity, "on|off (off = zero-padded ablation)")
        ->capture_default_str();
    tr->add_option("--scale", topts.scale, "full|reduced")->capture_default_str();
    tr->add_option("--model-out", topts.model_out, "Model file to write");
    tr->add_option("--history-out", topts.history_out, "Per-epoch JSON-lines history");
    tr->add_option("--repeats", topts.repeats, "Re-split/re-init repetitions; metrics averaged")
        ->capture_default_str();
    tr->add_flag("--skip-bad", topts.skip_bad, "Skip malformed CSV lines instead of aborting");

    auto* ev = app.add_subcommand("evaluate", "Evaluate a model on a labelled CSV");
    EvalOpts eopts;
    ev->add_option("--model", eopts.model_path)->required();
    ev->add_option("--data", eopts.data_path)->required();
    ev->add_option("--roc-out", eopts.roc_out, "Write ROC points as CSV");
    ev->add_option("--scatter-out", eopts.scatter_out, "Write true/pred pairs as CSV");
    ev->add_option("--threshold", eopts.threshold)->capture_default_str();

    auto* pr = app.add_subcommand("predict", "Predict for one formula");
    std::string pred_model, pred_formula;
    pr->add_option("--model", pred_model)->required();
    pr->add_option("--formula", pred_formula)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (enc->parsed()) return cmd_encode(g, formula_text, representation);
        if (tr->parsed()) return cmd_train(g, topts);
        if (ev->parsed()) return cmd_evaluate(g, eopts);
        if (pr->parsed()) return cmd_predict(g, pred_model, pred_formula);
    } catch (const NonFiniteLoss& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
