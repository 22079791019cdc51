#include "cfrp/neuralnet.hpp"

#include <algorithm>
#include <cmath>

#include "cfrp/error.hpp"
#include "cfrp/random.hpp"

namespace cfrp::nn {

namespace {

inline double activate(Activation a, double z) noexcept {
    switch (a) {
        case Activation::Linear: return z;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::Relu: return z > 0 ? z : 0.0;
        case Activation::Tanh: return std::tanh(z);
    }
    return z;
}

// Derivative expressed through the activation output y = f(z).
inline double derivative(Activation a, double y) noexcept {
    switch (a) {
        case Activation::Linear: return 1.0;
        case Activation::Sigmoid: return y * (1.0 - y);
        case Activation::Relu: return y > 0 ? 1.0 : 0.0;
        case Activation::Tanh: return 1.0 - y * y;
    }
    return 1.0;
}

void check_weights(const Topology& t, std::span<const double> weights) {
    if (weights.size() != t.parameter_count()) {
        throw ValidationError("weight vector has " + std::to_string(weights.size()) + " entries, topology needs " +
                              std::to_string(t.parameter_count()));
    }
}

}  // namespace

std::string_view activation_name(Activation a) noexcept {
    switch (a) {
        case Activation::Linear: return "linear";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Relu: return "relu";
        case Activation::Tanh: return "tanh";
    }
    return "linear";
}

Activation activation_from_name(std::string_view name) {
    for (auto a : {Activation::Linear, Activation::Sigmoid, Activation::Relu, Activation::Tanh}) {
        if (activation_name(a) == name) return a;
    }
    throw ValidationError("unknown activation '" + std::string(name) + "'");
}

void Topology::validate() const {
    if (input_size == 0 || output_size == 0) throw ValidationError("topology: layer sizes must be >= 1");
    for (auto h : hidden_sizes) {
        if (h == 0) throw ValidationError("topology: hidden layer sizes must be >= 1");
    }
}

std::size_t Topology::fan_in(std::size_t layer) const {
    return layer == 0 ? input_size : hidden_sizes.at(layer - 1);
}

std::size_t Topology::fan_out(std::size_t layer) const {
    return layer == hidden_sizes.size() ? output_size : hidden_sizes.at(layer);
}

std::size_t Topology::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < layer_count(); ++l) n += fan_in(l) * fan_out(l) + fan_out(l);
    return n;
}

std::size_t parameter_count(const Topology& t) { return t.parameter_count(); }

std::vector<LayerParams> unflatten(const Topology& t, std::span<const double> weights) {
    check_weights(t, weights);
    std::vector<LayerParams> layers;
    std::size_t offset = 0;
    for (std::size_t l = 0; l < t.layer_count(); ++l) {
        LayerParams p;
        p.fan_in = t.fan_in(l);
        p.fan_out = t.fan_out(l);
        const auto nw = p.fan_in * p.fan_out;
        p.weights.assign(weights.begin() + offset, weights.begin() + offset + nw);
        offset += nw;
        p.biases.assign(weights.begin() + offset, weights.begin() + offset + p.fan_out);
        offset += p.fan_out;
        layers.push_back(std::move(p));
    }
    return layers;
}

WeightVector flatten(std::span<const LayerParams> layers) {
    WeightVector out;
    for (const auto& p : layers) {
        if (p.weights.size() != p.fan_in * p.fan_out || p.biases.size() != p.fan_out) {
            throw ValidationError("flatten: layer shape mismatch");
        }
        out.insert(out.end(), p.weights.begin(), p.weights.end());
        out.insert(out.end(), p.biases.begin(), p.biases.end());
    }
    return out;
}

void TrainingSet::add(std::span<const double> x, std::span<const double> y) {
    if (x.size() != input_size || y.size() != output_size) throw ValidationError("training sample shape mismatch");
    inputs.insert(inputs.end(), x.begin(), x.end());
    targets.insert(targets.end(), y.begin(), y.end());
}

Workspace::Workspace(const Topology& t) : topology_(t) {
    topology_.validate();
    std::size_t widest = std::max(t.input_size, t.output_size);
    for (auto h : t.hidden_sizes) widest = std::max(widest, h);
    a_.resize(widest);
    b_.resize(widest);
}

std::span<const double> Workspace::forward(std::span<const double> weights, std::span<const double> x) {
    const auto& t = topology_;
    if (x.size() != t.input_size) {
        throw ValidationError("input has " + std::to_string(x.size()) + " features, network expects " +
                              std::to_string(t.input_size));
    }
    check_weights(t, weights);

    std::copy(x.begin(), x.end(), a_.begin());
    double* in = a_.data();
    double* out = b_.data();
    const double* w = weights.data();
    for (std::size_t l = 0; l < t.layer_count(); ++l) {
        const auto fi = t.fan_in(l), fo = t.fan_out(l);
        const double* bias = w + fi * fo;
        const auto act = l + 1 == t.layer_count() ? t.output_activation : t.hidden_activation;
        for (std::size_t j = 0; j < fo; ++j) {
            const double* row = w + j * fi;
            double z = bias[j];
            for (std::size_t i = 0; i < fi; ++i) z += row[i] * in[i];
            out[j] = activate(act, z);
        }
        w = bias + fo;
        std::swap(in, out);
    }
    return {in, t.output_size};
}

double Workspace::mse(std::span<const double> weights, const TrainingSet& data) {
    const std::size_t n = data.size();
    if (n == 0) throw ValidationError("mse: empty training set");
    double sum = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const auto y = forward(weights, data.input(s));
        const auto target = data.target(s);
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double e = y[k] - target[k];
            sum += e * e;
        }
    }
    return sum / static_cast<double>(n * data.output_size);
}

std::vector<double> forward(const Topology& t, std::span<const double> weights, std::span<const double> x) {
    Workspace ws(t);
    const auto y = ws.forward(weights, x);
    return {y.begin(), y.end()};
}

WeightVector init_weights(const Topology& t, std::uint64_t seed, double scale) {
    t.validate();
    Rng rng(seed);
    WeightVector w(t.parameter_count());
    for (auto& v : w) v = scale == 0 ? 0.0 : rng.uniform(-scale, scale);
    return w;
}

Gradient gradient(const Topology& t, std::span<const double> weights, const TrainingSet& batch) {
    t.validate();
    check_weights(t, weights);
    const std::size_t n = batch.size();
    if (n == 0) throw ValidationError("gradient: empty batch");
    if (batch.input_size != t.input_size || batch.output_size != t.output_size) {
        throw ValidationError("gradient: batch shape does not match topology");
    }

    const std::size_t layers = t.layer_count();
    std::vector<std::size_t> offsets(layers);
    for (std::size_t l = 0, off = 0; l < layers; ++l) {
        offsets[l] = off;
        off += t.fan_in(l) * t.fan_out(l) + t.fan_out(l);
    }

    // activations[0] is the input, activations[l + 1] the output of layer l.
    std::vector<std::vector<double>> activations(layers + 1);
    activations[0].resize(t.input_size);
    for (std::size_t l = 0; l < layers; ++l) activations[l + 1].resize(t.fan_out(l));
    std::vector<double> delta, prev_delta;

    Gradient g;
    g.values.assign(weights.size(), 0.0);
    const double scale = 1.0 / static_cast<double>(n * t.output_size);

    for (std::size_t s = 0; s < n; ++s) {
        const auto x = batch.input(s);
        std::copy(x.begin(), x.end(), activations[0].begin());
        for (std::size_t l = 0; l < layers; ++l) {
            const auto fi = t.fan_in(l), fo = t.fan_out(l);
            const double* w = weights.data() + offsets[l];
            const double* bias = w + fi * fo;
            const auto act = l + 1 == layers ? t.output_activation : t.hidden_activation;
            for (std::size_t j = 0; j < fo; ++j) {
                double z = bias[j];
                for (std::size_t i = 0; i < fi; ++i) z += w[j * fi + i] * activations[l][i];
                activations[l + 1][j] = activate(act, z);
            }
        }

        const auto target = batch.target(s);
        const auto& y = activations[layers];
        delta.assign(t.output_size, 0.0);
        for (std::size_t k = 0; k < t.output_size; ++k) {
            const double e = y[k] - target[k];
            g.loss += e * e;
            delta[k] = 2.0 * e * scale * derivative(t.output_activation, y[k]);
        }

        for (std::size_t l = layers; l-- > 0;) {
            const auto fi = t.fan_in(l), fo = t.fan_out(l);
            const double* w = weights.data() + offsets[l];
            double* gw = g.values.data() + offsets[l];
            double* gb = gw + fi * fo;
            const auto& in = activations[l];
            for (std::size_t j = 0; j < fo; ++j) {
                for (std::size_t i = 0; i < fi; ++i) gw[j * fi + i] += delta[j] * in[i];
                gb[j] += delta[j];
            }
            if (l == 0) break;
            prev_delta.assign(fi, 0.0);
            for (std::size_t j = 0; j < fo; ++j) {
                for (std::size_t i = 0; i < fi; ++i) prev_delta[i] += w[j * fi + i] * delta[j];
            }
            for (std::size_t i = 0; i < fi; ++i) prev_delta[i] *= derivative(t.hidden_activation, in[i]);
            std::swap(delta, prev_delta);
        }
    }
    g.loss *= scale;
    return g;
}

BackpropResult train_backprop(const Topology& t, const TrainingSet& data, const BackpropConfig& config,
                              const TrainingSet* validation) {
    if (!(config.learning_rate > 0)) throw ValidationError("learning rate must be positive");
    if (config.epochs < 1) throw ValidationError("epochs must be >= 1");

    BackpropResult result;
    result.weights = init_weights(t, config.seed, config.init_scale);
    result.loss_history.reserve(config.epochs);

    Workspace ws(t);
    const bool early_stop = config.patience.has_value() && validation != nullptr;
    double best_val = early_stop ? ws.mse(result.weights, *validation) : 0.0;
    WeightVector best_weights = result.weights;
    std::size_t since_best = 0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const auto g = gradient(t, result.weights, data);
        if (epoch == 0) result.initial_loss = g.loss;
        if (!std::isfinite(g.loss)) throw NumericError(epoch, 0, "non-finite training loss");
        for (std::size_t i = 0; i < g.values.size(); ++i) result.weights[i] -= config.learning_rate * g.values[i];

        const double loss = ws.mse(result.weights, data);
        if (!std::isfinite(loss)) throw NumericError(epoch + 1, 0, "non-finite training loss");
        result.loss_history.push_back(loss);
        result.epochs_run = epoch + 1;

        if (early_stop) {
            const double val = ws.mse(result.weights, *validation);
            if (val < best_val) {
                best_val = val;
                best_weights = result.weights;
                since_best = 0;
            } else if (++since_best >= *config.patience) {
                break;
            }
        }
    }
    if (early_stop) result.weights = best_weights;
    return result;
}

}  // namespace cfrp::nn
