#include <doctest.h>

#include <cmath>
#include <vector>

#include "cfrp/error.hpp"
#include "cfrp/metrics.hpp"
#include "cfrp/random.hpp"

using namespace cfrp;
using namespace cfrp::metrics;

namespace {

using Vec = std::vector<double>;

// Textbook formulas, written independently of the library.
double naive_mse(const Vec& y, const Vec& p) {
    long double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (long double)(y[i] - p[i]) * (y[i] - p[i]);
    return static_cast<double>(s / y.size());
}

double naive_mae(const Vec& y, const Vec& p) {
    long double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += std::fabs(y[i] - p[i]);
    return static_cast<double>(s / y.size());
}

double naive_r2(const Vec& x, const Vec& y) {
    const long double n = x.size();
    long double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += (long double)x[i] * y[i];
        sxx += (long double)x[i] * x[i];
        syy += (long double)y[i] * y[i];
    }
    const long double r = (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    return static_cast<double>(r * r);
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("hand-computed values") {
    const Vec t{1, 2, 3}, p{1, 2, 4};
    CHECK(mse(t, t) == 0);
    CHECK(mae(t, t) == 0);
    CHECK(mse(t, p) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(mae(t, p) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(r_squared(t, Vec{1, 2, 2}) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(r_squared(t, t) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(mse(Vec{1, 2}, Vec{1}), ValidationError);
    CHECK_THROWS_AS(mae(Vec{}, Vec{}), ValidationError);
    CHECK_THROWS_AS(r_squared(Vec{1, 2, 3}, Vec{2, 2, 2}), ValidationError);
    CHECK_THROWS_AS(r_squared(Vec{1}, Vec{1}), ValidationError);
}

TEST_CASE("agreement with a naive oracle on random inputs") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.below(60);
        const double scale = std::pow(10.0, rng.uniform(-3, 3));
        Vec y(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = scale * rng.uniform(-1, 1);
            p[i] = y[i] + scale * 0.3 * rng.normal();
        }
        REQUIRE(close(mse(y, p), naive_mse(y, p), 1e-12));
        REQUIRE(close(mae(y, p), naive_mae(y, p), 1e-12));
        REQUIRE(close(r_squared(y, p), naive_r2(y, p), 1e-10));
        CHECK(mae(y, p) <= std::sqrt(mse(y, p)) * (1 + 1e-12));
    }
}

TEST_CASE("invariances") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + rng.below(40);
        Vec y(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.uniform(10, 300);
            p[i] = y[i] * rng.uniform(0.8, 1.2);
        }
        const double r2 = r_squared(y, p);
        CHECK(r2 >= 0);
        CHECK(r2 <= 1 + 1e-15);

        // Affine maps of either argument, as used by normalization.
        const double a = rng.uniform(0.001, 5) * (rng.uniform() < 0.5 ? -1 : 1), b = rng.uniform(-100, 100);
        Vec ya(n), pa(n);
        for (std::size_t i = 0; i < n; ++i) {
            ya[i] = a * y[i] + b;
            pa[i] = a * p[i] + b;
        }
        CHECK(std::abs(r_squared(ya, p) - r2) <= 1e-12);
        CHECK(std::abs(r_squared(y, pa) - r2) <= 1e-12);
        CHECK(std::abs(r_squared(y, Vec(y)) - 1) <= 1e-12);

        // Shifting both leaves the errors unchanged.
        Vec ys(n), ps(n);
        for (std::size_t i = 0; i < n; ++i) {
            ys[i] = y[i] + 1000;
            ps[i] = p[i] + 1000;
        }
        CHECK(close(mse(ys, ps), mse(y, p), 1e-9));

        // Simultaneous permutation.
        Vec yp = y, pp = p;
        for (std::size_t i = n - 1; i > 0; --i) {
            const std::size_t j = rng.below(i + 1);
            std::swap(yp[i], yp[j]);
            std::swap(pp[i], pp[j]);
        }
        CHECK(close(mse(yp, pp), mse(y, p), 1e-12));
        CHECK(close(mae(yp, pp), mae(y, p), 1e-12));
        CHECK(std::abs(r_squared(yp, pp) - r2) <= 1e-12);
    }
}

TEST_CASE("evaluate") {
    const Vec t{10, 20, 30, 40}, p{11, 19, 33, 40};
    const auto r = evaluate(t, p);
    CHECK(r.n == 4);
    CHECK(r.mse == mse(t, p));
    CHECK(r.mae == mae(t, p));
    REQUIRE(r.r_squared);
    CHECK(*r.accuracy_percent == doctest::Approx(100 * *r.r_squared).epsilon(1e-15));
    CHECK(r.pairs.size() == 4);
    CHECK(r.pairs[2] == std::pair{30.0, 33.0});
    CHECK(r.mae * r.mae <= r.mse);

    SUBCASE("single record has no r squared") {
        const auto one = evaluate(Vec{5}, Vec{5});
        CHECK(one.mse == 0);
        CHECK_FALSE(one.r_squared);
        CHECK_FALSE(one.accuracy_percent);
    }
    SUBCASE("constant predictions have no r squared") { CHECK_FALSE(evaluate(t, Vec{1, 1, 1, 1}).r_squared); }
}
