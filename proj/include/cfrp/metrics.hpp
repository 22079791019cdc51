#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cfrp::metrics {

double mse(std::span<const double> targets, std::span<const double> predictions);
double mae(std::span<const double> targets, std::span<const double> predictions);

// Squared Pearson correlation between targets and predictions. Throws
// ValidationError when either vector is constant or shorter than 2.
double r_squared(std::span<const double> x, std::span<const double> y);

struct EvaluationReport {
    std::size_t n = 0;
    double mse = 0;
    double mae = 0;
    std::optional<double> r_squared;  // absent when n < 2 or a vector is constant
    std::optional<double> accuracy_percent;
    std::vector<std::pair<double, double>> pairs;  // (target, prediction)
};

EvaluationReport evaluate(std::span<const double> targets, std::span<const double> predictions);

}  // namespace cfrp::metrics
