#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfrp::nn {

enum class Activation { Linear, Sigmoid, Relu, Tanh };

std::string_view activation_name(Activation a) noexcept;
Activation activation_from_name(std::string_view name);

struct Topology {
    std::size_t input_size = 7;
    std::vector<std::size_t> hidden_sizes{50};
    std::size_t output_size = 1;
    Activation hidden_activation = Activation::Tanh;
    Activation output_activation = Activation::Linear;

    // Throws ValidationError on zero-sized layers.
    void validate() const;
    std::size_t parameter_count() const;
    std::size_t layer_count() const noexcept { return hidden_sizes.size() + 1; }
    std::size_t fan_in(std::size_t layer) const;
    std::size_t fan_out(std::size_t layer) const;

    bool operator==(const Topology&) const = default;
};

std::size_t parameter_count(const Topology& t);

// Flat parameters, layer by layer; within a layer the fan_out x fan_in
// weight matrix (row-major) comes first, then the fan_out biases.
using WeightVector = std::vector<double>;

struct LayerParams {
    std::size_t fan_in = 0;
    std::size_t fan_out = 0;
    std::vector<double> weights;  // row-major fan_out x fan_in
    std::vector<double> biases;

    bool operator==(const LayerParams&) const = default;
};

std::vector<LayerParams> unflatten(const Topology& t, std::span<const double> weights);
WeightVector flatten(std::span<const LayerParams> layers);

// Normalized inputs and targets, row-major.
struct TrainingSet {
    std::size_t input_size = 0;
    std::size_t output_size = 1;
    std::vector<double> inputs;
    std::vector<double> targets;

    std::size_t size() const noexcept { return output_size ? targets.size() / output_size : 0; }
    std::span<const double> input(std::size_t i) const {
        return {inputs.data() + i * input_size, input_size};
    }
    std::span<const double> target(std::size_t i) const {
        return {targets.data() + i * output_size, output_size};
    }
    void add(std::span<const double> x, std::span<const double> y);
};

// Scratch buffers for allocation-free forward passes. One per thread.
class Workspace {
public:
    explicit Workspace(const Topology& t);

    // Writes the network output into the returned span (valid until the
    // next call).
    std::span<const double> forward(std::span<const double> weights, std::span<const double> x);

    // Mean of squared errors over every output of every sample.
    double mse(std::span<const double> weights, const TrainingSet& data);

    const Topology& topology() const noexcept { return topology_; }

private:
    Topology topology_;
    std::vector<double> a_;
    std::vector<double> b_;
};

std::vector<double> forward(const Topology& t, std::span<const double> weights, std::span<const double> x);

// Uniform in [-scale, scale], deterministic per seed.
WeightVector init_weights(const Topology& t, std::uint64_t seed, double scale = 0.5);

struct Gradient {
    double loss = 0;
    std::vector<double> values;
};

// Exact gradient of the batch MSE by backpropagation.
Gradient gradient(const Topology& t, std::span<const double> weights, const TrainingSet& batch);

struct BackpropConfig {
    double learning_rate = 0.05;
    std::size_t epochs = 900;
    std::uint64_t seed = 1;
    double init_scale = 0.5;
    // Early stopping on a held-out set; off unless patience is set.
    std::optional<std::size_t> patience;
};

struct BackpropResult {
    WeightVector weights;
    double initial_loss = 0;
    std::vector<double> loss_history;  // training MSE after each epoch
    std::size_t epochs_run = 0;
};

// Full-batch gradient descent from init_weights(t, seed, init_scale).
// Throws NumericError when the loss becomes non-finite.
BackpropResult train_backprop(const Topology& t, const TrainingSet& data, const BackpropConfig& config,
                              const TrainingSet* validation = nullptr);

}  // namespace cfrp::nn
