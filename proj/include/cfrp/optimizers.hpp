#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cfrp/neuralnet.hpp"
#include "cfrp/random.hpp"

namespace cfrp::opt {

// Objective to minimize. Must be safe to call concurrently when the
// optimizer is configured with more than one thread.
using Objective = std::function<double(std::span<const double>)>;

struct SearchSpace {
    std::vector<double> lower;
    std::vector<double> upper;

    static SearchSpace box(std::size_t dimension, double lo, double hi);
    std::size_t dimension() const noexcept { return lower.size(); }
    void validate() const;
    bool contains(std::span<const double> x) const noexcept;
    void clip(std::span<double> x) const noexcept;
};

struct PsoConfig {
    std::size_t population = 70;
    std::size_t iterations = 900;
    double inertia_weight = 0.729;
    double cognitive_weight = 1.49445;
    double social_weight = 1.49445;
    double velocity_clamp = 0.2;  // fraction of the box width per dimension
    std::uint64_t seed = 1;
    std::size_t threads = 1;

    void validate() const;
};

struct GwoConfig {
    std::size_t population = 75;
    std::size_t iterations = 900;
    std::uint64_t seed = 1;
    std::size_t threads = 1;

    void validate() const;
};

struct BaConfig {
    std::size_t population = 80;
    std::size_t iterations = 900;
    double f_min = 0.0;
    double f_max = 2.0;
    double loudness = 1.0;    // A0
    double pulse_rate = 0.5;  // r0
    double alpha = 0.9;       // loudness decay
    double gamma = 0.9;       // pulse-rate growth
    double velocity_clamp = 0.2;
    std::uint64_t seed = 1;
    std::size_t threads = 1;

    void validate() const;
};

struct OptimizationTrace {
    std::vector<double> best_fitness;  // after each iteration
    std::vector<double> best_position;
    double final_fitness = 0;
    std::size_t evaluations = 0;
};

// One PSO particle. Exposed so the update rule can be exercised directly.
struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    double best_fitness = 0;
};

// v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x); x <- x + v, with the
// velocity clamped and the position clipped to the space.
void pso_move(Particle& p, std::span<const double> global_best, const PsoConfig& config, const SearchSpace& space,
              Rng& rng);

// Canonical grey-wolf move: the mean of the three leader-guided positions.
void gwo_move(std::span<double> wolf, std::span<const double> alpha, std::span<const double> beta,
              std::span<const double> delta, double a, const SearchSpace& space, Rng& rng);

struct Bat {
    std::vector<double> position;
    std::vector<double> velocity;
    double fitness = 0;
    double loudness = 1.0;
    double pulse_rate = 0.5;
};

// Candidate position for one bat: frequency-tuned velocity step, replaced
// by a loudness-scaled walk around the global best with probability equal
// to the bat's pulse rate. Updates the bat's velocity in place.
std::vector<double> ba_candidate(Bat& bat, std::span<const double> global_best, double mean_loudness,
                                 const BaConfig& config, const SearchSpace& space, Rng& rng);

// Loudness and pulse-rate update after an accepted move at iteration t (1-based).
void ba_accept(Bat& bat, const BaConfig& config, std::size_t t);

OptimizationTrace pso_run(const PsoConfig& config, const SearchSpace& space, const Objective& objective);
OptimizationTrace gwo_run(const GwoConfig& config, const SearchSpace& space, const Objective& objective);
OptimizationTrace ba_run(const BaConfig& config, const SearchSpace& space, const Objective& objective);

// MSE of the network on a normalized training set, as an objective over
// flattened weight vectors. Thread-safe.
Objective objective_from_dataset(const nn::Topology& topology, const nn::TrainingSet& data);

enum class Algorithm { Pso, Gwo, Ba };

std::string_view algorithm_name(Algorithm a) noexcept;

using HybridConfig = std::variant<PsoConfig, GwoConfig, BaConfig>;

Algorithm algorithm_of(const HybridConfig& c) noexcept;

struct HybridResult {
    nn::WeightVector weights;
    OptimizationTrace trace;
};

inline constexpr double kWeightBound = 0.5;

// Searches weights in [-0.5, 0.5]^parameter_count with the selected optimizer.
HybridResult train_hybrid(const nn::Topology& topology, const nn::TrainingSet& data, const HybridConfig& config);

}  // namespace cfrp::opt
