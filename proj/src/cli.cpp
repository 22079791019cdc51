#include "cfrp/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "cfrp/dataset.hpp"
#include "cfrp/error.hpp"
#include "cfrp/experiment.hpp"
#include "cfrp/mechanics.hpp"
#include "cfrp/metrics.hpp"

namespace cfrp::cli {

namespace {

namespace fs = std::filesystem;
namespace ex = cfrp::experiment;
using nlohmann::json;

// A user error detected by the CLI itself; exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 1;
    bool seed_set = false;
    std::string format = "text";
    std::string out_dir;
    bool quiet = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json stats_to_json(const FieldStats& s) {
    return {{"min", s.min},       {"max", s.max},     {"range", s.range}, {"mean", s.mean},
            {"median", s.median}, {"stdev", s.stdev}, {"cov", s.cov}};
}

json summary_json(const DatasetSummary& summary, const CorrelationMatrix& corr) {
    json fields = json::object();
    for (Field f : kAllFields) fields[std::string(field_name(f))] = stats_to_json(summary[f]);
    json names = json::array();
    for (Field f : kAllFields) names.push_back(field_name(f));
    json matrix = json::array();
    for (const auto& row : corr) matrix.push_back(row);
    return {{"count", summary.count}, {"fields", fields}, {"correlation", {{"fields", names}, {"matrix", matrix}}}};
}

void write_summary_csv(std::ostream& os, const DatasetSummary& summary) {
    os << "statistic";
    for (Field f : kAllFields) os << ',' << field_name(f);
    os << '\n';
    const std::pair<const char*, double FieldStats::*> rows[] = {
        {"min", &FieldStats::min},       {"max", &FieldStats::max},     {"range", &FieldStats::range},
        {"mean", &FieldStats::mean},     {"median", &FieldStats::median}, {"stdev", &FieldStats::stdev},
        {"cov", &FieldStats::cov},
    };
    for (const auto& [label, member] : rows) {
        os << label;
        for (Field f : kAllFields) os << ',' << summary[f].*member;
        os << '\n';
    }
}

void write_correlation_csv(std::ostream& os, const CorrelationMatrix& corr) {
    os << "field";
    for (Field f : kAllFields) os << ',' << field_name(f);
    os << '\n';
    for (Field f : kAllFields) {
        os << field_name(f);
        for (double v : corr[static_cast<std::size_t>(f)]) os << ',' << v;
        os << '\n';
    }
}

fs::path output_dir(const Globals& g) {
    fs::path dir = g.out_dir.empty() ? fs::path(".") : fs::path(g.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    out.precision(17);
    return out;
}

// "d=150,h=300,..." -> {"d": 150, ...}
std::map<std::string, double> parse_assignments(const std::string& text) {
    std::map<std::string, double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("expected key=value, got '" + item + "'");
        const auto key = item.substr(0, eq);
        try {
            std::size_t used = 0;
            const double v = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
            values[key] = v;
        } catch (const std::exception&) {
            throw UsageError("value for '" + key + "' is not a number");
        }
    }
    return values;
}

SpecimenRecord apply_assignments(SpecimenRecord r, const std::map<std::string, double>& values) {
    for (const auto& [key, v] : values) {
        if (key == "eps_f") {
            r.eps_f_pct = v;
        } else if (key == "eps_h_rup") {
            r.eps_h_rup_pct = v;
        } else if (const auto f = field_from_name(key)) {
            r.set(*f, v);
        } else {
            throw UsageError("unknown input '" + key + "'");
        }
    }
    return r;
}

void print_report(std::ostream& os, const char* label, const metrics::EvaluationReport& r, bool percent) {
    os << "  " << label << ": ";
    if (percent) {
        os << "MSE " << 100.0 * r.mse << " %, MAE " << 100.0 * r.mae << " %";
    } else {
        os << "MSE " << r.mse << " MPa^2, MAE " << r.mae << " MPa";
    }
    os << '\n';
}

json comparison_json(const ex::ComparisonTable& table) {
    json rows = json::array();
    for (const auto& r : table) {
        rows.push_back({{"model", r.model},
                        {"ok", r.ok},
                        {"error", r.error},
                        {"n", r.n},
                        {"accuracy_percent", opt_json(r.accuracy_percent)},
                        {"r_squared", opt_json(r.r_squared)},
                        {"mse_percent", r.mse_percent},
                        {"mae_percent", r.mae_percent},
                        {"mse_mpa", r.mse_mpa},
                        {"mae_mpa", r.mae_mpa}});
    }
    return rows;
}

void print_table(std::ostream& os, const ex::ComparisonTable& table) {
    os << std::left << std::setw(12) << "model" << std::right << std::setw(12) << "accuracy%" << std::setw(12)
       << "MSE%" << std::setw(12) << "MAE%" << std::setw(14) << "MAE(MPa)" << '\n';
    for (const auto& r : table) {
        os << std::left << std::setw(12) << r.model << std::right;
        if (!r.ok) {
            os << "  failed: " << r.error << '\n';
            continue;
        }
        os << std::fixed << std::setprecision(3) << std::setw(12)
           << (r.accuracy_percent ? *r.accuracy_percent : std::nan("")) << std::setw(12) << r.mse_percent
           << std::setw(12) << r.mae_percent << std::setw(14) << r.mae_mpa << std::defaultfloat
           << std::setprecision(6) << '\n';
    }
}

// Builds a default sweep base for a model: training-range midpoints for
// its features, reference means for everything else.
SpecimenRecord sweep_base(const ex::Model& model) {
    SpecimenRecord r;
    for (Field f : kAllFields) r.set(f, kReferenceMeans[static_cast<std::size_t>(f)]);
    r.h = 2.0 * r.d;
    if (const auto* nm = model.neural()) {
        for (const auto& b : nm->normalizer.features) r.set(b.field, 0.5 * (b.min + b.max));
    }
    return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strength prediction for CFRP-confined concrete cylinders"};
    app.name(args.empty() ? "cfrp" : fs::path(args[0]).filename().string());
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Master seed for every randomized step (default 1)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", g.out_dir, "Output directory for report files (default .)");
    app.add_flag("--quiet", g.quiet, "Suppress informational messages");

    // stats
    std::string stats_path;
    auto* stats = app.add_subcommand("stats", "Summary statistics and correlation matrix of a dataset");
    stats->add_option("dataset", stats_path, "Dataset CSV")->required();

    // validate
    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a dataset against the reference ranges");
    validate->add_option("dataset", validate_path, "Dataset CSV")->required();

    // train
    std::string train_path, train_model_name, train_config;
    double train_fraction = 0.75;
    std::size_t threads = 1;
    auto* train = app.add_subcommand("train", "Train one model (ann, pso, gwo, ba) on the training split");
    train->add_option("dataset", train_path, "Dataset CSV")->required();
    train->add_option("--model", train_model_name, "ann | pso | gwo | ba")->required();
    train->add_option("--config", train_config, "JSON config overriding the built-in defaults");
    train->add_option("--train-fraction", train_fraction, "Training share of the seeded split (default 0.75)");
    train->add_option("--threads", threads, "Objective evaluation threads (results do not depend on it)");

    // evaluate
    std::string eval_model, eval_data, eval_split = "all";
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a saved model on a dataset");
    evaluate->add_option("model", eval_model, "Model JSON")->required();
    evaluate->add_option("dataset", eval_data, "Dataset CSV")->required();
    evaluate->add_option("--split", eval_split, "all | train | test (re-creates the model's training split)")
        ->check(CLI::IsMember({"all", "train", "test"}));

    // predict
    std::string predict_model, predict_input;
    auto* predict = app.add_subcommand("predict", "Predict fcc for one specimen");
    predict->add_option("model", predict_model, "Model JSON")->required();
    predict->add_option("--input", predict_input,
                        "Specimen as key=value list, e.g. d=150,h=300,nt=0.334,ef=231,fco=16.5,eco=0.2,ecc=1.1 "
                        "(strains in %, optional eps_f / eps_h_rup in %)")
        ->required();

    // compare
    std::string compare_config;
    auto* compare = app.add_subcommand("compare", "Train and compare the configured roster on one shared split");
    compare->add_option("config", compare_config, "Experiment config JSON")->required();
    compare->add_option("--threads", threads, "Objective evaluation threads");

    // sweep
    std::string sweep_model, sweep_var, sweep_base_text;
    double sweep_from = 0, sweep_to = 0;
    std::size_t sweep_steps = 10;
    auto* sweep = app.add_subcommand("sweep", "Parametric sweep of one input");
    sweep->add_option("model", sweep_model, "Model JSON")->required();
    sweep->add_option("--var", sweep_var, "fco | d | ef | nt")->required()->check(CLI::IsMember({"fco", "d", "ef", "nt"}));
    sweep->add_option("--from", sweep_from, "First grid value")->required();
    sweep->add_option("--to", sweep_to, "Last grid value")->required();
    sweep->add_option("--steps", sweep_steps, "Number of grid points (default 10)");
    sweep->add_option("--base", sweep_base_text, "Fixed inputs as key=value list");

    // synth
    std::size_t synth_n = 708;
    double synth_noise = 0.02;
    std::string synth_path;
    experiment::SynthParams synth_params;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic database (CSV to a file or stdout)");
    synth->add_option("--n", synth_n, "Record count (default 708)");
    synth->add_option("--noise", synth_noise, "Multiplicative Gaussian label noise fraction (default 0.02)");
    synth->add_option("--eps-f-min", synth_params.eps_f_min, "Lower bound of the sampled fiber strain (dimensionless)");
    synth->add_option("--eps-f-max", synth_params.eps_f_max, "Upper bound of the sampled fiber strain (dimensionless)");
    synth->add_option("path", synth_path, "Output CSV; stdout when omitted");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    g.seed_set = app.count("--seed") > 0;
    auto info = [&]() -> std::ostream& { return err; };

    try {
        if (*stats) {
            const auto records = load_dataset(stats_path);
            const auto summary = summary_stats(records);
            const auto corr = correlation_matrix(records);
            const auto doc = summary_json(summary, corr);
            if (g.format == "json") {
                out << doc.dump(2) << '\n';
            } else if (g.format == "csv") {
                out.precision(17);
                write_summary_csv(out, summary);
            } else {
                out << "records: " << summary.count << '\n';
                out << std::left << std::setw(8) << "field" << std::right;
                for (const char* h : {"min", "max", "range", "mean", "median", "stdev", "cov"}) out << std::setw(12) << h;
                out << '\n';
                for (Field f : kAllFields) {
                    const auto& s = summary[f];
                    out << std::left << std::setw(8) << field_name(f) << std::right << std::setprecision(6);
                    for (double v : {s.min, s.max, s.range, s.mean, s.median, s.stdev, s.cov}) out << std::setw(12) << v;
                    out << '\n';
                }
                out << "\ncorrelation:\n" << std::setw(8) << "";
                for (Field f : kAllFields) out << std::setw(9) << field_name(f);
                out << '\n';
                for (Field f : kAllFields) {
                    out << std::left << std::setw(8) << field_name(f) << std::right << std::fixed << std::setprecision(3);
                    for (double v : corr[static_cast<std::size_t>(f)]) out << std::setw(9) << v;
                    out << std::defaultfloat << '\n';
                }
            }
            const auto dir = output_dir(g);
            open_out(dir / "summary.json") << doc.dump(2) << '\n';
            auto summary_csv = open_out(dir / "summary.csv");
            write_summary_csv(summary_csv, summary);
            auto corr_csv = open_out(dir / "correlation.csv");
            write_correlation_csv(corr_csv, corr);
            return kOk;
        }

        if (*validate) {
            const auto records = load_dataset(validate_path);
            const auto report = validate_ranges(records);
            if (g.format == "json") {
                json flags = json::array();
                for (const auto& f : report.out_of_range) {
                    flags.push_back({{"record", f.record},
                                     {"field", field_name(f.field)},
                                     {"value", f.value},
                                     {"min", f.range.min},
                                     {"max", f.range.max}});
                }
                out << json{{"records", report.records},
                            {"out_of_range", flags},
                            {"strength_below_unconfined", report.strength_below_unconfined}}
                           .dump(2)
                    << '\n';
            } else {
                out << report.records << " records, " << report.out_of_range.size() << " out-of-range values\n";
                for (const auto& f : report.out_of_range) {
                    out << "  record " << f.record << ": " << field_name(f.field) << " = " << f.value
                        << " outside [" << f.range.min << ", " << f.range.max << "]\n";
                }
                if (!report.strength_below_unconfined.empty()) {
                    out << report.strength_below_unconfined.size() << " records with fcc < fco\n";
                }
            }
            return kOk;
        }

        if (*train) {
            const auto kind = ex::kind_from_name(train_model_name);
            if (!kind || (*kind != ex::ModelKind::Ann && *kind != ex::ModelKind::Pso && *kind != ex::ModelKind::Gwo &&
                          *kind != ex::ModelKind::Ba)) {
                throw UsageError("unknown model '" + train_model_name + "'; valid models: ann, pso, gwo, ba");
            }
            ex::ExperimentConfig config;
            if (!train_config.empty()) ex::apply_config_json(read_file(train_config), config);
            if (g.seed_set) config.seed = g.seed;
            if (train->count("--train-fraction")) config.train_fraction = train_fraction;
            if (train->count("--threads")) config.threads = threads;
            config.roster = {{*kind, {}}};
            config.validate();

            const auto records = load_dataset(train_path);
            const auto parts = split(records, config.train_fraction, config.seed);
            const auto normalizer = fit_normalizer(parts.train, config.features);
            const auto seed = ex::model_seed(config.seed, train_model_name);
            if (!g.quiet) info() << "training " << train_model_name << " on " << parts.train.size() << " of "
                                 << records.size() << " records (seed " << config.seed << ")\n";
            auto trained = ex::train_model(config.roster.front(), config, parts.train, normalizer, seed);
            std::get<ex::NeuralModel>(trained.model.impl).provenance.split =
                ex::SplitInfo{config.seed, config.train_fraction, records.size(), parts.train.size()};

            const auto dir = output_dir(g);
            const auto model_path = dir / ("model_" + train_model_name + ".json");
            ex::export_model(trained.model, model_path);
            auto trace = open_out(dir / ("trace_" + train_model_name + ".csv"));
            trace << "iteration,best_fitness\n";
            for (std::size_t i = 0; i < trained.trace.size(); ++i) trace << i + 1 << ',' << trained.trace[i] << '\n';
            out << "model written to " << model_path.string() << "; final training MSE "
                << (trained.trace.empty() ? std::nan("") : trained.trace.back()) << '\n';
            return kOk;
        }

        if (*evaluate) {
            const auto model = ex::import_model(eval_model);
            auto records = load_dataset(eval_data);
            std::string split_note = "all records";
            std::optional<ex::SplitInfo> split_info;
            if (const auto* nm = model.neural()) split_info = nm->provenance.split;
            if (eval_split != "all") {
                if (!split_info) throw UsageError("model carries no split provenance; use --split all");
                if (split_info->n_total != records.size()) {
                    throw UsageError("dataset size " + std::to_string(records.size()) +
                                     " differs from the model's training dataset (" +
                                     std::to_string(split_info->n_total) + ")");
                }
                auto parts = split(records, split_info->train_fraction, split_info->seed);
                records = eval_split == "train" ? parts.train : parts.test;
                split_note = eval_split + " partition (seed " + std::to_string(split_info->seed) + ", fraction " +
                             std::to_string(split_info->train_fraction) + ")";
            }
            NormalizationSpec normalizer;
            if (const auto* nm = model.neural()) {
                normalizer = nm->normalizer;
            } else {
                normalizer = fit_normalizer(records, std::span<const Field>{});
            }
            const auto ev = ex::evaluate_model(model, records, normalizer);

            json prov = nullptr;
            if (const auto* nm = model.neural()) {
                prov = {{"optimizer", nm->provenance.optimizer},
                        {"seed", nm->provenance.seed},
                        {"iterations", nm->provenance.iterations}};
                if (split_info) {
                    prov["split"] = {{"seed", split_info->seed},
                                     {"train_fraction", split_info->train_fraction},
                                     {"n_total", split_info->n_total},
                                     {"n_train", split_info->n_train}};
                }
            }
            const json doc = {{"model", model.name},
                              {"n", ev.physical.n},
                              {"evaluated_on", split_note},
                              {"accuracy_percent", opt_json(ev.physical.accuracy_percent)},
                              {"r_squared", opt_json(ev.physical.r_squared)},
                              {"normalized", {{"mse_percent", 100.0 * ev.normalized.mse}, {"mae_percent", 100.0 * ev.normalized.mae}}},
                              {"physical", {{"mse_mpa2", ev.physical.mse}, {"mae_mpa", ev.physical.mae}}},
                              {"provenance", prov}};
            if (g.format == "json") {
                out << doc.dump(2) << '\n';
            } else {
                out << "model " << model.name << " on " << split_note << ", n = " << ev.physical.n << '\n';
                if (ev.physical.accuracy_percent) {
                    out << "  accuracy: " << *ev.physical.accuracy_percent << " % (R^2 " << *ev.physical.r_squared << ")\n";
                } else {
                    out << "  accuracy: not computable (n < 2 or constant values)\n";
                }
                print_report(out, "normalized", ev.normalized, true);
                print_report(out, "physical", ev.physical, false);
            }
            if (!g.out_dir.empty()) {
                const auto dir = output_dir(g);
                open_out(dir / ("evaluation_" + model.name + ".json")) << doc.dump(2) << '\n';
                auto pred = open_out(dir / ("predictions_" + model.name + ".csv"));
                pred << "target_mpa,prediction_mpa\n";
                for (const auto& [t, p] : ev.physical.pairs) pred << t << ',' << p << '\n';
            }
            return kOk;
        }

        if (*predict) {
            const auto model = ex::import_model(predict_model);
            const auto values = parse_assignments(predict_input);
            SpecimenRecord r;
            for (Field f : kAllFields) r.set(f, kReferenceMeans[static_cast<std::size_t>(f)]);
            if (const auto* nm = model.neural()) {
                for (Field f : nm->features()) {
                    if (!values.count(std::string(field_name(f)))) {
                        throw UsageError("missing feature: " + std::string(field_name(f)));
                    }
                }
            } else {
                for (const char* key : {"d", "nt", "ef", "fco"}) {
                    if (!values.count(key)) throw UsageError(std::string("missing feature: ") + key);
                }
            }
            r = apply_assignments(r, values);
            for (const auto& [key, v] : values) {
                if (!(v > 0)) throw UsageError("feature " + key + " must be positive");
            }
            if (const auto* nm = model.neural()) {
                for (const auto& b : nm->normalizer.features) {
                    const double v = r.get(b.field);
                    if (v < b.min || v > b.max) {
                        err << "warning: " << field_name(b.field) << " = " << v << " is outside the training range ["
                            << b.min << ", " << b.max << "]; the prediction extrapolates\n";
                    }
                }
            }
            const double fcc = model.predict(r);
            if (g.format == "json") {
                out << json{{"model", model.name}, {"fcc_mpa", fcc}}.dump(2) << '\n';
            } else {
                out << "fcc = " << std::setprecision(6) << fcc << " MPa\n";
            }
            return kOk;
        }

        if (*compare) {
            auto config = ex::config_from_json(read_file(compare_config));
            if (g.seed_set) config.seed = g.seed;
            if (compare->count("--threads")) config.threads = threads;
            if (!g.out_dir.empty()) config.output_dir = g.out_dir;
            if (config.output_dir.empty()) config.output_dir = ".";
            if (config.dataset_path.empty()) throw UsageError("config has no dataset");
            // Relative dataset paths resolve against the config file's directory.
            if (fs::path(config.dataset_path).is_relative() && !fs::exists(config.dataset_path)) {
                config.dataset_path = (fs::path(compare_config).parent_path() / config.dataset_path).string();
            }
            const auto result = ex::run_experiment(config);
            ex::write_reports(result, config.output_dir);
            const auto doc = comparison_json(result.table);
            {
                auto f = open_out(fs::path(config.output_dir) / "comparison.json");
                f << json{{"seed", config.seed},
                          {"train_fraction", config.train_fraction},
                          {"n_total", result.split.n_total},
                          {"n_train", result.split.n_train},
                          {"models", doc}}
                         .dump(2)
                  << '\n';
            }
            if (g.format == "json") {
                out << doc.dump(2) << '\n';
            } else {
                print_table(out, result.table);
            }
            for (const auto& s : result.sweeps) {
                for (const auto& w : s.warnings) err << "warning: " << w << '\n';
            }
            for (const auto& row : result.table) {
                if (!row.ok) return kRuntime;
            }
            return kOk;
        }

        if (*sweep) {
            const auto model = ex::import_model(sweep_model);
            ex::SweepSpec spec;
            spec.var = *field_from_name(sweep_var);
            spec.from = sweep_from;
            spec.to = sweep_to;
            spec.steps = sweep_steps;
            if (!(spec.from < spec.to)) throw UsageError("--from must be smaller than --to");
            auto base = sweep_base(model);
            if (!sweep_base_text.empty()) base = apply_assignments(base, parse_assignments(sweep_base_text));
            const auto grid = ex::parametric_sweep(model, base, spec);
            for (const auto& w : grid.warnings) err << "warning: " << w << '\n';

            const auto dir = output_dir(g);
            auto csv = open_out(dir / ("sweep_" + sweep_var + ".csv"));
            csv << sweep_var << ",fcc_mpa\n";
            for (std::size_t i = 0; i < grid.values.size(); ++i) csv << grid.values[i] << ',' << grid.predictions[i] << '\n';

            if (g.format == "json") {
                out << json{{"var", sweep_var},
                            {"model", model.name},
                            {"values", grid.values},
                            {"fcc_mpa", grid.predictions},
                            {"percent_change", grid.percent_change}}
                           .dump(2)
                    << '\n';
            } else if (g.format == "csv") {
                out.precision(17);
                out << sweep_var << ",fcc_mpa\n";
                for (std::size_t i = 0; i < grid.values.size(); ++i) out << grid.values[i] << ',' << grid.predictions[i] << '\n';
            } else {
                for (std::size_t i = 0; i < grid.values.size(); ++i) {
                    out << sweep_var << " = " << grid.values[i] << "  fcc = " << grid.predictions[i] << " MPa\n";
                }
                out << "change over the grid: " << grid.percent_change << " %\n";
            }
            return kOk;
        }

        if (*synth) {
            const auto records = ex::synth_dataset(synth_n, g.seed, synth_noise, synth_params);
            if (synth_path.empty()) {
                write_dataset(out, records);
            } else {
                save_dataset(synth_path, records);
                if (!g.quiet) info() << records.size() << " records written to " << synth_path << '\n';
            }
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace cfrp::cli
