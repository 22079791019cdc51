#include "cfrp/optimizers.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <memory>
#include <numeric>
#include <thread>

#include "cfrp/error.hpp"

namespace cfrp::opt {

namespace {

// Fills fitness[i] = objective(positions[i]). With threads > 1 the
// population is split into contiguous chunks; results land by index, so
// the outcome is identical to the sequential loop.
void evaluate_all(const Objective& objective, const std::vector<std::vector<double>>& positions,
                  std::vector<double>& fitness, std::size_t threads, std::size_t iteration) {
    const std::size_t n = positions.size();
    fitness.resize(n);
    threads = std::clamp<std::size_t>(threads, 1, n);
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fitness[i] = objective(positions[i]);
    } else {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            const std::size_t end = std::min(n, begin + chunk);
            workers.emplace_back([&, begin, end] {
                for (std::size_t i = begin; i < end; ++i) fitness[i] = objective(positions[i]);
            });
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(fitness[i])) throw NumericError(iteration, i, "objective returned a non-finite value");
    }
}

std::vector<double> random_position(const SearchSpace& space, Rng& rng) {
    std::vector<double> x(space.dimension());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.uniform(space.lower[j], space.upper[j]);
    return x;
}

std::vector<Rng> make_streams(std::uint64_t seed, std::size_t count) {
    std::vector<Rng> streams;
    streams.reserve(count);
    for (std::size_t i = 0; i < count; ++i) streams.emplace_back(derive_seed(seed, i));
    return streams;
}

void clamp_velocity(std::span<double> v, const SearchSpace& space, double fraction) {
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double vmax = fraction * (space.upper[j] - space.lower[j]);
        v[j] = std::clamp(v[j], -vmax, vmax);
    }
}

void check_common(std::size_t population, std::size_t min_population, std::size_t iterations, const char* name) {
    if (population < min_population) {
        throw ValidationError(std::string(name) + ": population must be >= " + std::to_string(min_population));
    }
    if (iterations < 1) throw ValidationError(std::string(name) + ": iterations must be >= 1");
}

}  // namespace

SearchSpace SearchSpace::box(std::size_t dimension, double lo, double hi) {
    SearchSpace s{std::vector<double>(dimension, lo), std::vector<double>(dimension, hi)};
    s.validate();
    return s;
}

void SearchSpace::validate() const {
    if (lower.empty() || lower.size() != upper.size()) throw ValidationError("search space: bad dimension");
    for (std::size_t j = 0; j < lower.size(); ++j) {
        if (!(upper[j] > lower[j])) throw ValidationError("search space: upper must exceed lower in every dimension");
    }
}

bool SearchSpace::contains(std::span<const double> x) const noexcept {
    if (x.size() != lower.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] < lower[j] || x[j] > upper[j]) return false;
    }
    return true;
}

void SearchSpace::clip(std::span<double> x) const noexcept {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], lower[j], upper[j]);
}

void PsoConfig::validate() const {
    check_common(population, 2, iterations, "pso");
    if (!(inertia_weight >= 0)) throw ValidationError("pso: inertia weight must be >= 0");
    if (!(cognitive_weight > 0) || !(social_weight > 0)) throw ValidationError("pso: c1 and c2 must be > 0");
    if (!(velocity_clamp > 0)) throw ValidationError("pso: velocity clamp must be > 0");
}

void GwoConfig::validate() const { check_common(population, 3, iterations, "gwo"); }

void BaConfig::validate() const {
    check_common(population, 2, iterations, "ba");
    if (!(f_max > f_min) || !(f_min >= 0)) throw ValidationError("ba: need f_max > f_min >= 0");
    if (!(loudness > 0)) throw ValidationError("ba: initial loudness must be > 0");
    if (!(pulse_rate >= 0 && pulse_rate <= 1)) throw ValidationError("ba: pulse rate must be in [0, 1]");
    if (!(alpha > 0 && alpha < 1)) throw ValidationError("ba: alpha must be in (0, 1)");
    if (!(gamma > 0)) throw ValidationError("ba: gamma must be > 0");
    if (!(velocity_clamp > 0)) throw ValidationError("ba: velocity clamp must be > 0");
}

void pso_move(Particle& p, std::span<const double> global_best, const PsoConfig& config, const SearchSpace& space,
              Rng& rng) {
    for (std::size_t j = 0; j < p.position.size(); ++j) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        p.velocity[j] = config.inertia_weight * p.velocity[j] +
                        config.cognitive_weight * r1 * (p.best_position[j] - p.position[j]) +
                        config.social_weight * r2 * (global_best[j] - p.position[j]);
    }
    clamp_velocity(p.velocity, space, config.velocity_clamp);
    for (std::size_t j = 0; j < p.position.size(); ++j) p.position[j] += p.velocity[j];
    space.clip(p.position);
}

OptimizationTrace pso_run(const PsoConfig& config, const SearchSpace& space, const Objective& objective) {
    config.validate();
    space.validate();
    const std::size_t n = config.population;
    auto rngs = make_streams(config.seed, n);

    std::vector<Particle> swarm(n);
    std::vector<std::vector<double>> positions(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& p = swarm[i];
        p.position = random_position(space, rngs[i]);
        p.velocity.resize(space.dimension());
        for (std::size_t j = 0; j < p.velocity.size(); ++j) {
            const double vmax = config.velocity_clamp * (space.upper[j] - space.lower[j]);
            p.velocity[j] = rngs[i].uniform(-vmax, vmax);
        }
        positions[i] = p.position;
    }

    std::vector<double> fitness;
    evaluate_all(objective, positions, fitness, config.threads, 0);
    OptimizationTrace trace;
    trace.evaluations = n;

    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        swarm[i].best_position = swarm[i].position;
        swarm[i].best_fitness = fitness[i];
        if (fitness[i] < fitness[best]) best = i;
    }
    std::vector<double> gbest = swarm[best].best_position;
    double gbest_fitness = swarm[best].best_fitness;

    trace.best_fitness.reserve(config.iterations);
    for (std::size_t t = 1; t <= config.iterations; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            pso_move(swarm[i], gbest, config, space, rngs[i]);
            positions[i] = swarm[i].position;
        }
        evaluate_all(objective, positions, fitness, config.threads, t);
        trace.evaluations += n;
        for (std::size_t i = 0; i < n; ++i) {
            auto& p = swarm[i];
            if (fitness[i] < p.best_fitness) {
                p.best_fitness = fitness[i];
                p.best_position = p.position;
                if (fitness[i] < gbest_fitness) {
                    gbest_fitness = fitness[i];
                    gbest = p.position;
                }
            }
        }
        trace.best_fitness.push_back(gbest_fitness);
    }
    trace.best_position = std::move(gbest);
    trace.final_fitness = gbest_fitness;
    return trace;
}

void gwo_move(std::span<double> wolf, std::span<const double> alpha, std::span<const double> beta,
              std::span<const double> delta, double a, const SearchSpace& space, Rng& rng) {
    auto guided = [&](double leader, double x) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        const double A = 2.0 * a * r1 - a;
        const double C = 2.0 * r2;
        return leader - A * std::abs(C * leader - x);
    };
    for (std::size_t j = 0; j < wolf.size(); ++j) {
        const double x1 = guided(alpha[j], wolf[j]);
        const double x2 = guided(beta[j], wolf[j]);
        const double x3 = guided(delta[j], wolf[j]);
        // Mean of the three, written so coincident leaders are reproduced exactly.
        wolf[j] = x1 + ((x2 - x1) + (x3 - x1)) / 3.0;
    }
    space.clip(wolf);
}

OptimizationTrace gwo_run(const GwoConfig& config, const SearchSpace& space, const Objective& objective) {
    config.validate();
    space.validate();
    const std::size_t n = config.population;
    auto rngs = make_streams(config.seed, n);

    std::vector<std::vector<double>> wolves(n);
    for (std::size_t i = 0; i < n; ++i) wolves[i] = random_position(space, rngs[i]);

    struct Leader {
        std::vector<double> position;
        double fitness = std::numeric_limits<double>::infinity();
    };
    std::array<Leader, 3> leaders;  // alpha, beta, delta
    auto offer = [&](const std::vector<double>& x, double f) {
        for (std::size_t k = 0; k < leaders.size(); ++k) {
            if (f < leaders[k].fitness) {
                for (std::size_t m = leaders.size() - 1; m > k; --m) leaders[m] = leaders[m - 1];
                leaders[k] = {x, f};
                return;
            }
        }
    };

    std::vector<double> fitness;
    evaluate_all(objective, wolves, fitness, config.threads, 0);
    OptimizationTrace trace;
    trace.evaluations = n;
    for (std::size_t i = 0; i < n; ++i) offer(wolves[i], fitness[i]);

    trace.best_fitness.reserve(config.iterations);
    const std::size_t T = config.iterations;
    for (std::size_t t = 0; t < T; ++t) {
        const double a = T > 1 ? 2.0 * (1.0 - static_cast<double>(t) / static_cast<double>(T - 1)) : 2.0;
        for (std::size_t i = 0; i < n; ++i) {
            gwo_move(wolves[i], leaders[0].position, leaders[1].position, leaders[2].position, a, space, rngs[i]);
        }
        evaluate_all(objective, wolves, fitness, config.threads, t + 1);
        trace.evaluations += n;
        for (std::size_t i = 0; i < n; ++i) offer(wolves[i], fitness[i]);
        trace.best_fitness.push_back(leaders[0].fitness);
    }
    trace.best_position = leaders[0].position;
    trace.final_fitness = leaders[0].fitness;
    return trace;
}

std::vector<double> ba_candidate(Bat& bat, std::span<const double> global_best, double mean_loudness,
                                 const BaConfig& config, const SearchSpace& space, Rng& rng) {
    const double frequency = config.f_min + (config.f_max - config.f_min) * rng.uniform();
    for (std::size_t j = 0; j < bat.velocity.size(); ++j) {
        bat.velocity[j] += (bat.position[j] - global_best[j]) * frequency;
    }
    clamp_velocity(bat.velocity, space, config.velocity_clamp);

    std::vector<double> candidate(bat.position.size());
    if (rng.uniform() < bat.pulse_rate) {
        for (std::size_t j = 0; j < candidate.size(); ++j) {
            candidate[j] = global_best[j] + rng.uniform(-1.0, 1.0) * mean_loudness;
        }
    } else {
        for (std::size_t j = 0; j < candidate.size(); ++j) candidate[j] = bat.position[j] + bat.velocity[j];
    }
    space.clip(candidate);
    return candidate;
}

void ba_accept(Bat& bat, const BaConfig& config, std::size_t t) {
    bat.loudness *= config.alpha;
    bat.pulse_rate = config.pulse_rate * (1.0 - std::exp(-config.gamma * static_cast<double>(t)));
}

OptimizationTrace ba_run(const BaConfig& config, const SearchSpace& space, const Objective& objective) {
    config.validate();
    space.validate();
    const std::size_t n = config.population;
    auto rngs = make_streams(config.seed, n);

    std::vector<Bat> bats(n);
    std::vector<std::vector<double>> positions(n);
    for (std::size_t i = 0; i < n; ++i) {
        bats[i].position = random_position(space, rngs[i]);
        bats[i].velocity.assign(space.dimension(), 0.0);
        bats[i].loudness = config.loudness;
        bats[i].pulse_rate = config.pulse_rate;
        positions[i] = bats[i].position;
    }

    std::vector<double> fitness;
    evaluate_all(objective, positions, fitness, config.threads, 0);
    OptimizationTrace trace;
    trace.evaluations = n;

    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bats[i].fitness = fitness[i];
        if (fitness[i] < fitness[best]) best = i;
    }
    std::vector<double> gbest = bats[best].position;
    double gbest_fitness = bats[best].fitness;

    trace.best_fitness.reserve(config.iterations);
    for (std::size_t t = 1; t <= config.iterations; ++t) {
        double mean_loudness = 0;
        for (const auto& b : bats) mean_loudness += b.loudness;
        mean_loudness /= static_cast<double>(n);

        for (std::size_t i = 0; i < n; ++i) {
            positions[i] = ba_candidate(bats[i], gbest, mean_loudness, config, space, rngs[i]);
        }
        evaluate_all(objective, positions, fitness, config.threads, t);
        trace.evaluations += n;

        for (std::size_t i = 0; i < n; ++i) {
            auto& bat = bats[i];
            const bool loud_enough = rngs[i].uniform() < bat.loudness;
            if (loud_enough && fitness[i] < bat.fitness) {
                bat.position = positions[i];
                bat.fitness = fitness[i];
                ba_accept(bat, config, t);
            }
            if (fitness[i] < gbest_fitness) {
                gbest_fitness = fitness[i];
                gbest = positions[i];
            }
        }
        trace.best_fitness.push_back(gbest_fitness);
    }
    trace.best_position = std::move(gbest);
    trace.final_fitness = gbest_fitness;
    return trace;
}

Objective objective_from_dataset(const nn::Topology& topology, const nn::TrainingSet& data) {
    topology.validate();
    if (data.size() == 0) throw ValidationError("objective: empty training set");
    if (data.input_size != topology.input_size || data.output_size != topology.output_size) {
        throw ValidationError("objective: training set shape does not match topology");
    }
    auto shared = std::make_shared<const std::pair<nn::Topology, nn::TrainingSet>>(topology, data);
    return [shared](std::span<const double> weights) {
        nn::Workspace ws(shared->first);
        return ws.mse(weights, shared->second);
    };
}

std::string_view algorithm_name(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::Pso: return "pso";
        case Algorithm::Gwo: return "gwo";
        case Algorithm::Ba: return "ba";
    }
    return "pso";
}

Algorithm algorithm_of(const HybridConfig& c) noexcept {
    return static_cast<Algorithm>(c.index());
}

HybridResult train_hybrid(const nn::Topology& topology, const nn::TrainingSet& data, const HybridConfig& config) {
    const auto objective = objective_from_dataset(topology, data);
    const auto space = SearchSpace::box(topology.parameter_count(), -kWeightBound, kWeightBound);
    struct Visitor {
        const SearchSpace& space;
        const Objective& objective;
        OptimizationTrace operator()(const PsoConfig& c) const { return pso_run(c, space, objective); }
        OptimizationTrace operator()(const GwoConfig& c) const { return gwo_run(c, space, objective); }
        OptimizationTrace operator()(const BaConfig& c) const { return ba_run(c, space, objective); }
    };
    HybridResult result;
    result.trace = std::visit(Visitor{space, objective}, config);
    result.weights = result.trace.best_position;
    return result;
}

}  // namespace cfrp::opt
