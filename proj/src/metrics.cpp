#include "cfrp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfrp/error.hpp"

namespace cfrp::metrics {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b, std::size_t min_size) {
    if (a.size() != b.size()) {
        throw ValidationError("metric: length mismatch (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    }
    if (a.size() < min_size) throw ValidationError("metric: need at least " + std::to_string(min_size) + " values");
}

}  // namespace

double mse(std::span<const double> targets, std::span<const double> predictions) {
    check_pair(targets, predictions, 1);
    double sum = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double e = targets[i] - predictions[i];
        sum += e * e;
    }
    return sum / static_cast<double>(targets.size());
}

double mae(std::span<const double> targets, std::span<const double> predictions) {
    check_pair(targets, predictions, 1);
    double sum = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) sum += std::abs(targets[i] - predictions[i]);
    return sum / static_cast<double>(targets.size());
}

// Same quantity as (n Sxy - Sx Sy)^2 / ((n Sxx - Sx^2)(n Syy - Sy^2)),
// evaluated on centered data to avoid cancellation.
double r_squared(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y, 2);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) throw ValidationError("r_squared: constant vector (zero variance)");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::min(1.0, r * r);
}

EvaluationReport evaluate(std::span<const double> targets, std::span<const double> predictions) {
    EvaluationReport report;
    report.n = targets.size();
    report.mse = mse(targets, predictions);
    report.mae = mae(targets, predictions);
    try {
        report.r_squared = r_squared(targets, predictions);
        report.accuracy_percent = 100.0 * *report.r_squared;
    } catch (const ValidationError&) {
        // not computable: n < 2 or zero variance
    }
    report.pairs.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) report.pairs.emplace_back(targets[i], predictions[i]);
    return report;
}

}  // namespace cfrp::metrics
