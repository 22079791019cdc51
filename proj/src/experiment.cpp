#include "cfrp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "cfrp/error.hpp"
#include "cfrp/random.hpp"

namespace cfrp::experiment {

namespace {

constexpr std::array<std::pair<ModelKind, std::string_view>, 7> kKindNames{{
    {ModelKind::Ann, "ann"},
    {ModelKind::Pso, "pso"},
    {ModelKind::Gwo, "gwo"},
    {ModelKind::Ba, "ba"},
    {ModelKind::LamTeng, "lam_teng"},
    {ModelKind::Miyauchi, "miyauchi"},
    {ModelKind::Nonlinear, "nonlinear"},
}};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out.precision(17);
    return out;
}

std::string opt_number(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream os;
    os.precision(17);
    os << *v;
    return os.str();
}

}  // namespace

std::string_view kind_name(ModelKind k) noexcept {
    for (const auto& [kind, name] : kKindNames) {
        if (kind == k) return name;
    }
    return "";
}

std::optional<ModelKind> kind_from_name(std::string_view name) noexcept {
    for (const auto& [kind, n] : kKindNames) {
        if (n == name) return kind;
    }
    return std::nullopt;
}

std::vector<Field> NeuralModel::features() const {
    std::vector<Field> out;
    for (const auto& b : normalizer.features) out.push_back(b.field);
    return out;
}

double NeuralModel::predict_normalized(std::span<const double> x) const {
    nn::Workspace ws(topology);
    return ws.forward(weights, x)[0];
}

double NeuralModel::predict(const SpecimenRecord& r) const {
    const auto z = predict_normalized(normalized_features(r, normalizer));
    return denormalize(z, normalizer.target, normalizer.lo, normalizer.hi);
}

double EmpiricalPredictor::predict(const SpecimenRecord& r) const {
    return mechanics::predict_record(r, model, eps_h_rup);
}

double Model::predict(const SpecimenRecord& r) const {
    return std::visit([&](const auto& m) { return m.predict(r); }, impl);
}

std::vector<double> Model::predict(std::span<const SpecimenRecord> records) const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(predict(r));
    return out;
}

void ExperimentConfig::validate() const {
    if (roster.empty()) throw ValidationError("experiment: roster is empty");
    if (features.empty()) throw ValidationError("experiment: no input features");
    std::set<std::string> names;
    for (const auto& e : roster) {
        if (!names.insert(e.name()).second) throw ValidationError("experiment: duplicate roster entry " + e.name());
    }
    std::set<Field> seen;
    for (Field f : features) {
        if (f == Field::Fcc) throw ValidationError("experiment: fcc is the target and cannot be a feature");
        if (!seen.insert(f).second) throw ValidationError("experiment: duplicate feature " + std::string(field_name(f)));
    }
    if (!(train_fraction > 0 && train_fraction < 1)) throw ValidationError("experiment: train_fraction must be in (0, 1)");
    if (ratio_bins < 1) throw ValidationError("experiment: ratio_bins must be >= 1");
}

nn::TrainingSet make_training_set(std::span<const SpecimenRecord> records, const NormalizationSpec& spec) {
    nn::TrainingSet set;
    set.input_size = spec.features.size();
    set.output_size = 1;
    for (const auto& r : records) {
        const auto x = normalized_features(r, spec);
        const double y = normalize(r.fcc, spec.target, spec.lo, spec.hi);
        set.add(x, std::span<const double>(&y, 1));
    }
    return set;
}

std::uint64_t model_seed(std::uint64_t master, std::string_view name) noexcept {
    return derive_seed(master, hash_name(name));
}

TrainOutput train_model(const RosterEntry& entry, const ExperimentConfig& config,
                        std::span<const SpecimenRecord> train, const NormalizationSpec& normalizer,
                        std::uint64_t seed) {
    TrainOutput out;
    out.model.name = entry.name();

    switch (entry.kind) {
        case ModelKind::LamTeng:
            out.model.impl = EmpiricalPredictor{mechanics::LamTeng{}, std::nullopt};
            return out;
        case ModelKind::Miyauchi:
            out.model.impl = EmpiricalPredictor{mechanics::Miyauchi{}, std::nullopt};
            return out;
        case ModelKind::Nonlinear:
            if (!(entry.params.k > 0) || !(entry.params.n > 0)) {
                throw ConfigError("nonlinear model needs user-supplied k > 0 and n > 0");
            }
            out.model.impl = EmpiricalPredictor{mechanics::Nonlinear{entry.params}, std::nullopt};
            return out;
        default:
            break;
    }

    nn::Topology topology = config.topology;
    topology.input_size = normalizer.features.size();
    topology.output_size = 1;
    const auto data = make_training_set(train, normalizer);

    NeuralModel nm;
    nm.topology = topology;
    nm.normalizer = normalizer;
    nm.provenance.seed = seed;

    if (entry.kind == ModelKind::Ann) {
        auto c = config.ann;
        c.seed = seed;
        auto result = nn::train_backprop(topology, data, c);
        nm.weights = std::move(result.weights);
        nm.provenance.optimizer = "backprop";
        nm.provenance.iterations = result.epochs_run;
        out.trace = std::move(result.loss_history);
        out.evaluations = result.epochs_run;
    } else {
        opt::HybridConfig hc;
        if (entry.kind == ModelKind::Pso) {
            auto c = config.pso;
            c.seed = seed;
            c.threads = config.threads;
            hc = c;
        } else if (entry.kind == ModelKind::Gwo) {
            auto c = config.gwo;
            c.seed = seed;
            c.threads = config.threads;
            hc = c;
        } else {
            auto c = config.ba;
            c.seed = seed;
            c.threads = config.threads;
            hc = c;
        }
        auto result = opt::train_hybrid(topology, data, hc);
        nm.weights = std::move(result.weights);
        nm.provenance.optimizer = std::string(opt::algorithm_name(opt::algorithm_of(hc)));
        nm.provenance.iterations = result.trace.best_fitness.size();
        out.trace = std::move(result.trace.best_fitness);
        out.evaluations = result.trace.evaluations;
    }
    out.model.impl = std::move(nm);
    return out;
}

ModelEvaluation evaluate_model(const Model& model, std::span<const SpecimenRecord> records,
                               const NormalizationSpec& normalizer) {
    if (records.empty()) throw ValidationError("evaluate: empty test set");
    const auto actual = column(records, Field::Fcc);
    const auto predicted = model.predict(records);
    std::vector<double> actual_n, predicted_n;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        actual_n.push_back(normalize(actual[i], normalizer.target, normalizer.lo, normalizer.hi));
        predicted_n.push_back(normalize(predicted[i], normalizer.target, normalizer.lo, normalizer.hi));
    }
    return {metrics::evaluate(actual_n, predicted_n), metrics::evaluate(actual, predicted)};
}

RatioDistribution ratio_distribution(std::span<const double> actual_fcc, std::span<const double> predicted_fcc,
                                     std::size_t bins) {
    if (actual_fcc.size() != predicted_fcc.size()) throw ValidationError("ratio distribution: length mismatch");
    if (bins < 1) throw ValidationError("ratio distribution: need at least one bin");

    RatioDistribution d;
    for (std::size_t i = 0; i < actual_fcc.size(); ++i) {
        if (!(predicted_fcc[i] > 0)) {
            ++d.excluded;
            continue;
        }
        d.ratios.push_back(actual_fcc[i] / predicted_fcc[i]);
    }
    d.counts.assign(bins, 0);
    if (d.ratios.empty()) return d;

    const double n = static_cast<double>(d.ratios.size());
    d.mean = std::accumulate(d.ratios.begin(), d.ratios.end(), 0.0) / n;
    if (d.ratios.size() > 1) {
        double ss = 0;
        for (double r : d.ratios) ss += (r - d.mean) * (r - d.mean);
        d.stdev = std::sqrt(ss / (n - 1));
    }

    const auto [lo_it, hi_it] = std::minmax_element(d.ratios.begin(), d.ratios.end());
    const double lo = *lo_it, hi = *hi_it;
    d.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        d.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    }
    d.edges.front() = lo;
    d.edges.back() = hi;
    for (double r : d.ratios) {
        std::size_t b = bins - 1;
        if (hi > lo) b = std::min(bins - 1, static_cast<std::size_t>((r - lo) / (hi - lo) * static_cast<double>(bins)));
        ++d.counts[b];
    }
    return d;
}

SweepGrid parametric_sweep(const Model& model, const SpecimenRecord& base, const SweepSpec& spec) {
    if (spec.var != Field::Fco && spec.var != Field::D && spec.var != Field::Ef && spec.var != Field::Nt) {
        throw ValidationError("sweep variable must be one of fco, d, ef, nt");
    }
    if (!(spec.from < spec.to)) throw ValidationError("sweep: 'from' must be smaller than 'to'");
    if (spec.steps < 2) throw ValidationError("sweep: need at least 2 steps");
    if (!(spec.from > 0)) throw ValidationError("sweep: values must be positive");

    SweepGrid grid;
    grid.var = spec.var;
    grid.model = model.name;
    grid.base = base;
    const double aspect = base.h / base.d;
    for (std::size_t i = 0; i < spec.steps; ++i) {
        const double v = i + 1 == spec.steps
                             ? spec.to
                             : spec.from + (spec.to - spec.from) * static_cast<double>(i) /
                                               static_cast<double>(spec.steps - 1);
        SpecimenRecord r = base;
        r.set(spec.var, v);
        if (spec.var == Field::D) r.h = aspect * v;
        grid.values.push_back(v);
        grid.predictions.push_back(model.predict(r));
    }
    grid.percent_change = 100.0 * (grid.predictions.back() - grid.predictions.front()) / grid.predictions.front();

    if (const auto* nm = model.neural()) {
        auto check = [&](Field f, double lo, double hi) {
            if (const auto* b = nm->normalizer.find(f); b && (lo < b->min || hi > b->max)) {
                std::ostringstream os;
                os << "sweep of " << field_name(f) << " over [" << lo << ", " << hi << "] leaves the training range ["
                   << b->min << ", " << b->max << "]; predictions extrapolate";
                grid.warnings.push_back(os.str());
            }
        };
        check(spec.var, spec.from, spec.to);
        if (spec.var == Field::D) check(Field::H, aspect * spec.from, aspect * spec.to);
    }
    return grid;
}

SpecimenRecord median_record(std::span<const SpecimenRecord> records) {
    if (records.empty()) throw ValidationError("median record of an empty dataset");
    SpecimenRecord m;
    for (Field f : kAllFields) m.set(f, median_of(column(records, f)));
    std::vector<double> eps_f, eps_rup;
    for (const auto& r : records) {
        if (r.eps_f_pct) eps_f.push_back(*r.eps_f_pct);
        if (r.eps_h_rup_pct) eps_rup.push_back(*r.eps_h_rup_pct);
    }
    if (!eps_f.empty()) m.eps_f_pct = median_of(eps_f);
    if (!eps_rup.empty()) m.eps_h_rup_pct = median_of(eps_rup);
    return m;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::span<const SpecimenRecord> records) {
    config.validate();
    if (records.size() < 4) throw ValidationError("experiment: need at least 4 records");

    ExperimentResult result;
    const auto parts = split(records, config.train_fraction, config.seed);
    result.split = {config.seed, config.train_fraction, records.size(), parts.train.size()};
    result.normalizer = fit_normalizer(parts.train, config.features);

    for (const auto& entry : config.roster) {
        ModelOutcome outcome;
        outcome.name = entry.name();
        ComparisonRow row;
        row.model = outcome.name;
        try {
            auto trained = train_model(entry, config, parts.train, result.normalizer,
                                       model_seed(config.seed, outcome.name));
            outcome.trace = std::move(trained.trace);
            outcome.actual = column(parts.test, Field::Fcc);
            outcome.predicted = trained.model.predict(parts.test);
            outcome.evaluation = evaluate_model(trained.model, parts.test, result.normalizer);
            outcome.model = std::move(trained.model);

            const auto& ev = outcome.evaluation;
            row.ok = true;
            row.n = ev.physical.n;
            row.r_squared = ev.physical.r_squared;
            row.accuracy_percent = ev.physical.accuracy_percent;
            row.mse_percent = 100.0 * ev.normalized.mse;
            row.mae_percent = 100.0 * ev.normalized.mae;
            row.mse_mpa = ev.physical.mse;
            row.mae_mpa = ev.physical.mae;
        } catch (const std::exception& e) {
            outcome.error = e.what();
            row.error = e.what();
        }
        result.outcomes.push_back(std::move(outcome));
        result.table.push_back(std::move(row));
    }

    // Best model by R^2 (first in roster order on ties).
    const ModelOutcome* best = nullptr;
    for (const auto& o : result.outcomes) {
        if (!o.model || !o.evaluation.physical.r_squared) continue;
        if (!best || *o.evaluation.physical.r_squared > *best->evaluation.physical.r_squared) best = &o;
    }
    if (best) {
        result.ratio_model = best->name;
        result.ratios = ratio_distribution(best->actual, best->predicted, config.ratio_bins);
    }

    const auto base = median_record(parts.train);
    for (const auto& spec : config.sweeps) {
        const ModelOutcome* target = spec.model.empty() ? best : nullptr;
        for (const auto& o : result.outcomes) {
            if (o.name == spec.model) target = &o;
        }
        if (!target || !target->model) {
            throw ValidationError("sweep: model '" + spec.model + "' is not an available trained roster model");
        }
        result.sweeps.push_back(parametric_sweep(*target->model, base, spec));
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto records = load_dataset(config.dataset_path);
    return run_experiment(config, records);
}

void write_reports(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    {
        auto out = open_output(dir / "comparison.csv");
        out << "model,ok,n,accuracy_percent,r_squared,mse_percent,mae_percent,mse_mpa,mae_mpa,error\n";
        for (const auto& r : result.table) {
            std::string err = r.error;
            std::replace(err.begin(), err.end(), ',', ';');
            std::replace(err.begin(), err.end(), '\n', ' ');
            out << r.model << ',' << (r.ok ? 1 : 0) << ',' << r.n << ',' << opt_number(r.accuracy_percent) << ','
                << opt_number(r.r_squared) << ',' << r.mse_percent << ',' << r.mae_percent << ',' << r.mse_mpa << ','
                << r.mae_mpa << ',' << err << '\n';
        }
    }

    for (const auto& o : result.outcomes) {
        if (o.model) {
            auto out = open_output(dir / ("predictions_" + o.name + ".csv"));
            out << "target_mpa,prediction_mpa\n";
            for (std::size_t i = 0; i < o.actual.size(); ++i) out << o.actual[i] << ',' << o.predicted[i] << '\n';
            if (o.model->is_neural()) export_model(*o.model, dir / ("model_" + o.name + ".json"));
        }
        if (!o.trace.empty()) {
            auto out = open_output(dir / ("trace_" + o.name + ".csv"));
            out << "iteration,best_fitness\n";
            for (std::size_t i = 0; i < o.trace.size(); ++i) out << i + 1 << ',' << o.trace[i] << '\n';
        }
    }

    for (const auto& g : result.sweeps) {
        auto out = open_output(dir / ("sweep_" + std::string(field_name(g.var)) + ".csv"));
        out << field_name(g.var) << ",fcc_mpa\n";
        for (std::size_t i = 0; i < g.values.size(); ++i) out << g.values[i] << ',' << g.predictions[i] << '\n';
    }

    if (result.ratios) {
        auto out = open_output(dir / "ratio_hist.csv");
        out << "bin_lo,bin_hi,count\n";
        const auto& d = *result.ratios;
        for (std::size_t b = 0; b < d.counts.size() && b + 1 < d.edges.size(); ++b) {
            out << d.edges[b] << ',' << d.edges[b + 1] << ',' << d.counts[b] << '\n';
        }
    }
}

std::vector<SpecimenRecord> synth_dataset(std::size_t n, std::uint64_t seed, double noise_fraction,
                                          const SynthParams& params) {
    if (n < 10) throw ValidationError("synth: n must be >= 10");
    if (!(noise_fraction >= 0) || !std::isfinite(noise_fraction)) throw ValidationError("synth: noise must be >= 0");
    if (!(params.eps_f_min > 0) || !(params.eps_f_max >= params.eps_f_min)) {
        throw ValidationError("synth: need 0 < eps_f_min <= eps_f_max");
    }

    Rng rng(seed);
    auto draw = [&](Field f) {
        const auto r = reference_range(f);
        return rng.uniform(r.min, r.max);
    };
    auto inside = [](Field f, double v) {
        const auto r = reference_range(f);
        return v >= r.min && v <= r.max;
    };

    std::vector<SpecimenRecord> out;
    out.reserve(n);
    std::size_t attempts = 0;
    while (out.size() < n) {
        if (++attempts > params.max_attempts) throw ValidationError("synth: rejection sampling did not converge");
        SpecimenRecord r;
        r.d = draw(Field::D);
        r.h = 2.0 * r.d;
        r.nt = draw(Field::Nt);
        r.ef = draw(Field::Ef);
        r.fco = draw(Field::Fco);
        r.eco = draw(Field::Eco);
        const double eps_f = rng.uniform(params.eps_f_min, params.eps_f_max);
        const double noise = rng.normal();

        r.eps_f_pct = eps_f * 100.0;
        r.eps_h_rup_pct = mechanics::hoop_rupture_strain(eps_f, r.fco) * 100.0;
        // Labels use the stored percent values so recomputation from a record is exact.
        const double f_l = mechanics::confinement_stress(r.ef * 1000.0, *r.eps_h_rup_pct / 100.0, r.nt, r.d);
        r.fcc = mechanics::lam_teng(r.fco, f_l) * (1.0 + noise_fraction * noise);

        // Synthetic confined strain: monotone in the stiffness ratio.
        const double rho_k = mechanics::stiffness_ratio(r.ef * 1000.0, r.nt, r.fco, r.eco / 100.0, r.d);
        r.ecc = r.eco * (1.0 + 4.0 * rho_k);

        if (inside(Field::H, r.h) && inside(Field::Fcc, r.fcc) && inside(Field::Ecc, r.ecc)) out.push_back(r);
    }
    return out;
}

}  // namespace cfrp::experiment
