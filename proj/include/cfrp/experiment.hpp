#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cfrp/dataset.hpp"
#include "cfrp/mechanics.hpp"
#include "cfrp/metrics.hpp"
#include "cfrp/neuralnet.hpp"
#include "cfrp/optimizers.hpp"

namespace cfrp::experiment {

struct SplitInfo {
    std::uint64_t seed = 0;
    double train_fraction = 0.75;
    std::size_t n_total = 0;
    std::size_t n_train = 0;

    bool operator==(const SplitInfo&) const = default;
};

struct Provenance {
    std::string optimizer;  // "backprop", "pso", "gwo", "ba"
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    std::optional<SplitInfo> split;

    bool operator==(const Provenance&) const = default;
};

// A trained network together with everything needed to predict in MPa.
struct NeuralModel {
    nn::Topology topology;
    nn::WeightVector weights;
    NormalizationSpec normalizer;
    Provenance provenance;

    std::vector<Field> features() const;
    double predict_normalized(std::span<const double> x) const;
    double predict(const SpecimenRecord& r) const;
};

// Closed-form baseline. `eps_h_rup` overrides the per-record rupture strain.
struct EmpiricalPredictor {
    mechanics::EmpiricalModel model;
    std::optional<double> eps_h_rup;

    double predict(const SpecimenRecord& r) const;
};

struct Model {
    std::string name;
    std::variant<NeuralModel, EmpiricalPredictor> impl;

    bool is_neural() const noexcept { return std::holds_alternative<NeuralModel>(impl); }
    const NeuralModel* neural() const noexcept { return std::get_if<NeuralModel>(&impl); }
    double predict(const SpecimenRecord& r) const;
    std::vector<double> predict(std::span<const SpecimenRecord> records) const;
};

enum class ModelKind { Ann, Pso, Gwo, Ba, LamTeng, Miyauchi, Nonlinear };

std::string_view kind_name(ModelKind k) noexcept;
std::optional<ModelKind> kind_from_name(std::string_view name) noexcept;

struct RosterEntry {
    ModelKind kind;
    mechanics::EmpiricalModelParams params{};  // Nonlinear only

    std::string name() const { return std::string(kind_name(kind)); }
};

struct SweepSpec {
    Field var = Field::Fco;
    double from = 0;
    double to = 0;
    std::size_t steps = 10;
    std::string model;  // roster name; empty = best model by R^2
};

struct ExperimentConfig {
    std::string dataset_path;
    std::vector<Field> features{kDefaultFeatures.begin(), kDefaultFeatures.end()};
    std::vector<RosterEntry> roster;
    nn::Topology topology;  // input_size is taken from features
    nn::BackpropConfig ann;
    opt::PsoConfig pso;
    opt::GwoConfig gwo;
    opt::BaConfig ba;
    std::uint64_t seed = 1;
    double train_fraction = 0.75;
    std::size_t threads = 1;
    std::size_t ratio_bins = 20;
    std::vector<SweepSpec> sweeps;
    std::string output_dir;

    void validate() const;
};

// Builds the normalized training set for the given feature order.
nn::TrainingSet make_training_set(std::span<const SpecimenRecord> records, const NormalizationSpec& spec);

// Per-model RNG seed derived from the master seed and the model name.
std::uint64_t model_seed(std::uint64_t master, std::string_view name) noexcept;

struct TrainOutput {
    Model model;
    std::vector<double> trace;  // best fitness / loss per iteration
    std::size_t evaluations = 0;
};

// Trains (neural kinds) or instantiates (empirical kinds) one roster model
// on the training partition. `seed` seeds the optimizer or initializer.
TrainOutput train_model(const RosterEntry& entry, const ExperimentConfig& config,
                        std::span<const SpecimenRecord> train, const NormalizationSpec& normalizer,
                        std::uint64_t seed);

struct ModelEvaluation {
    metrics::EvaluationReport normalized;  // metrics on the [0.1, 0.9] target scale
    metrics::EvaluationReport physical;    // metrics in MPa
};

ModelEvaluation evaluate_model(const Model& model, std::span<const SpecimenRecord> records,
                               const NormalizationSpec& normalizer);

struct ComparisonRow {
    std::string model;
    bool ok = false;
    std::string error;
    std::optional<double> accuracy_percent;
    std::optional<double> r_squared;
    double mse_percent = 0;  // normalized-scale MSE x 100
    double mae_percent = 0;  // normalized-scale MAE x 100
    double mse_mpa = 0;
    double mae_mpa = 0;
    std::size_t n = 0;
};

using ComparisonTable = std::vector<ComparisonRow>;

struct RatioDistribution {
    std::vector<double> ratios;
    std::size_t excluded = 0;  // predictions <= 0
    double mean = 0;
    double stdev = 0;
    std::vector<double> edges;  // bins + 1 values spanning [min, max]
    std::vector<std::size_t> counts;
};

// Histogram of (fcc/fco)_exp / (fcc/fco)_pred, i.e. fcc_exp / fcc_pred.
RatioDistribution ratio_distribution(std::span<const double> actual_fcc, std::span<const double> predicted_fcc,
                                     std::size_t bins = 20);

struct SweepGrid {
    Field var = Field::Fco;
    std::string model;
    SpecimenRecord base;
    std::vector<double> values;
    std::vector<double> predictions;
    double percent_change = 0;  // 100 (last - first) / first
    std::vector<std::string> warnings;
};

// Evaluates the model over an evenly spaced grid of one input with the
// rest held at `base`. Sweeping d keeps the base h/d aspect ratio.
SweepGrid parametric_sweep(const Model& model, const SpecimenRecord& base, const SweepSpec& spec);

// Per-field medians; rupture-strain columns are medians of the present values.
SpecimenRecord median_record(std::span<const SpecimenRecord> records);

struct ModelOutcome {
    std::string name;
    std::optional<Model> model;
    std::string error;
    std::vector<double> trace;
    std::vector<double> actual;     // test fcc, MPa
    std::vector<double> predicted;  // test predictions, MPa
    ModelEvaluation evaluation;
};

struct ExperimentResult {
    SplitInfo split;
    NormalizationSpec normalizer;
    std::vector<ModelOutcome> outcomes;
    ComparisonTable table;
    std::vector<SweepGrid> sweeps;
    std::optional<RatioDistribution> ratios;
    std::string ratio_model;
};

ExperimentResult run_experiment(const ExperimentConfig& config, std::span<const SpecimenRecord> records);
ExperimentResult run_experiment(const ExperimentConfig& config);

// Writes comparison.{json,csv}, predictions_<m>.csv, trace_<m>.csv,
// model_<m>.json, sweep_<var>.csv and ratio_hist.csv.
void write_reports(const ExperimentResult& result, const std::filesystem::path& dir);

struct SynthParams {
    // Fiber ultimate strain range, dimensionless. Narrow by default so the
    // unobserved fiber strain does not dominate the label noise.
    double eps_f_min = 0.015;
    double eps_f_max = 0.017;
    std::size_t max_attempts = 1'000'000;
};

// Synthetic stand-in for the reference database: inputs uniform within the
// reference ranges (h = 2 d), labels from the Lam-Teng model with
// multiplicative Gaussian noise. Records whose derived fields fall outside
// the reference ranges are resampled.
std::vector<SpecimenRecord> synth_dataset(std::size_t n, std::uint64_t seed, double noise_fraction,
                                          const SynthParams& params = {});

// JSON model files.
void export_model(const Model& model, const std::filesystem::path& path);
Model import_model(const std::filesystem::path& path);
std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);

// Config documents override only the keys they contain; unknown keys are
// rejected. Precedence is defaults < file < command-line flags.
ExperimentConfig config_from_json(const std::string& text);
void apply_config_json(const std::string& text, ExperimentConfig& config);

}  // namespace cfrp::experiment
