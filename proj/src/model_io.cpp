#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cfrp/error.hpp"
#include "cfrp/experiment.hpp"

namespace cfrp::experiment {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "cfrp-model";
constexpr int kVersion = 1;

Field parse_field(const json& j) {
    const auto name = j.get<std::string>();
    const auto f = field_from_name(name);
    if (!f) throw ValidationError("unknown field '" + name + "'");
    return *f;
}

json bounds_to_json(const FeatureBounds& b) {
    return {{"name", field_name(b.field)}, {"min", b.min}, {"max", b.max}};
}

FeatureBounds bounds_from_json(const json& j) {
    FeatureBounds b{parse_field(j.at("name")), j.at("min").get<double>(), j.at("max").get<double>()};
    if (!(b.max > b.min)) throw ValidationError("normalization bounds for " + std::string(field_name(b.field)) + " are empty");
    return b;
}

// Rejects keys outside `allowed` so typos in config files do not pass silently.
void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ValidationError(where + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string model_to_json(const Model& model) {
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["name"] = model.name;
    if (const auto* nm = model.neural()) {
        j["kind"] = "neural";
        j["topology"] = {
            {"input_size", nm->topology.input_size},
            {"hidden_sizes", nm->topology.hidden_sizes},
            {"output_size", nm->topology.output_size},
            {"hidden_activation", nn::activation_name(nm->topology.hidden_activation)},
            {"output_activation", nn::activation_name(nm->topology.output_activation)},
        };
        json features = json::array();
        for (const auto& b : nm->normalizer.features) features.push_back(bounds_to_json(b));
        j["normalization"] = {
            {"lo", nm->normalizer.lo},
            {"hi", nm->normalizer.hi},
            {"features", features},
            {"target", bounds_to_json(nm->normalizer.target)},
        };
        j["weights"] = nm->weights;
        json prov = {{"optimizer", nm->provenance.optimizer},
                     {"seed", nm->provenance.seed},
                     {"iterations", nm->provenance.iterations}};
        if (const auto& s = nm->provenance.split) {
            prov["split"] = {{"seed", s->seed},
                             {"train_fraction", s->train_fraction},
                             {"n_total", s->n_total},
                             {"n_train", s->n_train}};
        }
        j["provenance"] = prov;
    } else {
        const auto& e = std::get<EmpiricalPredictor>(model.impl);
        j["kind"] = "empirical";
        j["model"] = mechanics::model_name(e.model);
        if (const auto* nl = std::get_if<mechanics::Nonlinear>(&e.model)) {
            j["k"] = nl->params.k;
            j["n"] = nl->params.n;
        }
        if (e.eps_h_rup) j["eps_h_rup"] = *e.eps_h_rup;
    }
    return j.dump(2);
}

Model model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", "") != kFormat) throw ValidationError("not a cfrp model file");
        if (j.at("version").get<int>() != kVersion) throw ValidationError("unsupported model file version");

        Model model;
        model.name = j.at("name").get<std::string>();
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "empirical") {
            EmpiricalPredictor e;
            const auto name = j.at("model").get<std::string>();
            if (name == "lam_teng") {
                e.model = mechanics::LamTeng{};
            } else if (name == "miyauchi") {
                e.model = mechanics::Miyauchi{};
            } else if (name == "nonlinear") {
                e.model = mechanics::Nonlinear{{j.at("k").get<double>(), j.at("n").get<double>()}};
            } else {
                throw ValidationError("unknown empirical model '" + name + "'");
            }
            if (j.contains("eps_h_rup")) e.eps_h_rup = j.at("eps_h_rup").get<double>();
            model.impl = e;
            return model;
        }
        if (kind != "neural") throw ValidationError("unknown model kind '" + kind + "'");

        NeuralModel nm;
        const auto& t = j.at("topology");
        nm.topology.input_size = t.at("input_size").get<std::size_t>();
        nm.topology.hidden_sizes = t.at("hidden_sizes").get<std::vector<std::size_t>>();
        nm.topology.output_size = t.at("output_size").get<std::size_t>();
        nm.topology.hidden_activation = nn::activation_from_name(t.at("hidden_activation").get<std::string>());
        nm.topology.output_activation = nn::activation_from_name(t.at("output_activation").get<std::string>());
        nm.topology.validate();
        if (nm.topology.output_size != 1) throw ValidationError("model must have a single output");

        const auto& norm = j.at("normalization");
        nm.normalizer.lo = norm.at("lo").get<double>();
        nm.normalizer.hi = norm.at("hi").get<double>();
        for (const auto& f : norm.at("features")) nm.normalizer.features.push_back(bounds_from_json(f));
        nm.normalizer.target = bounds_from_json(norm.at("target"));
        if (nm.normalizer.features.size() != nm.topology.input_size) {
            throw ValidationError("model lists " + std::to_string(nm.normalizer.features.size()) +
                                  " features but its topology expects " + std::to_string(nm.topology.input_size));
        }

        nm.weights = j.at("weights").get<std::vector<double>>();
        if (nm.weights.size() != nm.topology.parameter_count()) {
            throw ValidationError("model has " + std::to_string(nm.weights.size()) + " weights, topology needs " +
                                  std::to_string(nm.topology.parameter_count()));
        }

        const auto& prov = j.at("provenance");
        nm.provenance.optimizer = prov.at("optimizer").get<std::string>();
        nm.provenance.seed = prov.at("seed").get<std::uint64_t>();
        nm.provenance.iterations = prov.at("iterations").get<std::size_t>();
        if (prov.contains("split")) {
            const auto& s = prov.at("split");
            nm.provenance.split = SplitInfo{s.at("seed").get<std::uint64_t>(), s.at("train_fraction").get<double>(),
                                            s.at("n_total").get<std::size_t>(), s.at("n_train").get<std::size_t>()};
        }
        model.impl = std::move(nm);
        return model;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model file: ") + e.what());
    }
}

void export_model(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write model '" + path.string() + "'");
    out << model_to_json(model) << '\n';
}

Model import_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read model '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

void apply_config_json(const std::string& text, ExperimentConfig& config) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        check_keys(j,
                   {"dataset", "features", "roster", "topology", "ann", "pso", "gwo", "ba", "seed", "train_fraction",
                    "threads", "ratio_bins", "sweeps", "out"},
                   "config");
        read_if(j, "dataset", config.dataset_path);
        read_if(j, "out", config.output_dir);
        read_if(j, "seed", config.seed);
        read_if(j, "train_fraction", config.train_fraction);
        read_if(j, "threads", config.threads);
        read_if(j, "ratio_bins", config.ratio_bins);

        if (j.contains("features")) {
            config.features.clear();
            for (const auto& f : j.at("features")) config.features.push_back(parse_field(f));
        }

        if (j.contains("roster")) {
            config.roster.clear();
            for (const auto& entry : j.at("roster")) {
                if (entry.is_string()) {
                    const auto name = entry.get<std::string>();
                    const auto kind = kind_from_name(name);
                    if (!kind) throw ValidationError("config: unknown roster model '" + name + "'");
                    if (*kind == ModelKind::Nonlinear) {
                        throw ConfigError("config: nonlinear model needs {\"nonlinear\": {\"k\": .., \"n\": ..}}");
                    }
                    config.roster.push_back({*kind, {}});
                } else if (entry.is_object() && entry.contains("nonlinear")) {
                    check_keys(entry, {"nonlinear"}, "config.roster");
                    const auto& p = entry.at("nonlinear");
                    check_keys(p, {"k", "n"}, "config.roster.nonlinear");
                    config.roster.push_back({ModelKind::Nonlinear, {p.at("k").get<double>(), p.at("n").get<double>()}});
                } else {
                    throw ValidationError("config: roster entries are names or {\"nonlinear\": {...}}");
                }
            }
        }

        if (j.contains("topology")) {
            const auto& t = j.at("topology");
            check_keys(t, {"hidden_sizes", "hidden_activation", "output_activation"}, "config.topology");
            read_if(t, "hidden_sizes", config.topology.hidden_sizes);
            if (t.contains("hidden_activation")) {
                config.topology.hidden_activation = nn::activation_from_name(t.at("hidden_activation").get<std::string>());
            }
            if (t.contains("output_activation")) {
                config.topology.output_activation = nn::activation_from_name(t.at("output_activation").get<std::string>());
            }
        }
        if (j.contains("ann")) {
            const auto& a = j.at("ann");
            check_keys(a, {"learning_rate", "epochs", "init_scale", "patience"}, "config.ann");
            read_if(a, "learning_rate", config.ann.learning_rate);
            read_if(a, "epochs", config.ann.epochs);
            read_if(a, "init_scale", config.ann.init_scale);
            if (a.contains("patience") && !a.at("patience").is_null()) {
                config.ann.patience = a.at("patience").get<std::size_t>();
            }
        }
        if (j.contains("pso")) {
            const auto& p = j.at("pso");
            check_keys(p, {"population", "iterations", "inertia_weight", "cognitive_weight", "social_weight",
                           "velocity_clamp"},
                       "config.pso");
            read_if(p, "population", config.pso.population);
            read_if(p, "iterations", config.pso.iterations);
            read_if(p, "inertia_weight", config.pso.inertia_weight);
            read_if(p, "cognitive_weight", config.pso.cognitive_weight);
            read_if(p, "social_weight", config.pso.social_weight);
            read_if(p, "velocity_clamp", config.pso.velocity_clamp);
        }
        if (j.contains("gwo")) {
            const auto& g = j.at("gwo");
            check_keys(g, {"population", "iterations"}, "config.gwo");
            read_if(g, "population", config.gwo.population);
            read_if(g, "iterations", config.gwo.iterations);
        }
        if (j.contains("ba")) {
            const auto& b = j.at("ba");
            check_keys(b, {"population", "iterations", "f_min", "f_max", "loudness", "pulse_rate", "alpha", "gamma",
                           "velocity_clamp"},
                       "config.ba");
            read_if(b, "population", config.ba.population);
            read_if(b, "iterations", config.ba.iterations);
            read_if(b, "f_min", config.ba.f_min);
            read_if(b, "f_max", config.ba.f_max);
            read_if(b, "loudness", config.ba.loudness);
            read_if(b, "pulse_rate", config.ba.pulse_rate);
            read_if(b, "alpha", config.ba.alpha);
            read_if(b, "gamma", config.ba.gamma);
            read_if(b, "velocity_clamp", config.ba.velocity_clamp);
        }
        if (j.contains("sweeps")) {
            config.sweeps.clear();
            for (const auto& s : j.at("sweeps")) {
                check_keys(s, {"var", "from", "to", "steps", "model"}, "config.sweeps");
                SweepSpec spec;
                spec.var = parse_field(s.at("var"));
                spec.from = s.at("from").get<double>();
                spec.to = s.at("to").get<double>();
                read_if(s, "steps", spec.steps);
                read_if(s, "model", spec.model);
                config.sweeps.push_back(spec);
            }
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
}

ExperimentConfig config_from_json(const std::string& text) {
    ExperimentConfig config;
    config.roster = {{ModelKind::Pso, {}}, {ModelKind::Gwo, {}}, {ModelKind::Ba, {}},
                     {ModelKind::Ann, {}}, {ModelKind::LamTeng, {}}, {ModelKind::Miyauchi, {}}};
    apply_config_json(text, config);
    config.validate();
    return config;
}

}  // namespace cfrp::experiment
