#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfrp/dataset.hpp"
#include "cfrp/error.hpp"
#include "cfrp/random.hpp"

using namespace cfrp;

namespace {

const char* kHeader = "d_mm,h_mm,nt_mm,ef_gpa,fco_mpa,eco_pct,ecc_pct,fcc_mpa\n";

std::vector<SpecimenRecord> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in);
}

SpecimenRecord make(double d, double fco, double fcc) {
    SpecimenRecord r{d, 2 * d, 0.5, 200, fco, 0.25, 1.2, fcc, {}, {}};
    return r;
}

std::vector<SpecimenRecord> random_records(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<SpecimenRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        SpecimenRecord r;
        for (Field f : kAllFields) {
            const auto range = reference_range(f);
            r.set(f, rng.uniform(range.min, range.max));
        }
        r.h = std::max(r.h, r.d);
        out.push_back(r);
    }
    return out;
}

}  // namespace

TEST_CASE("parse_dataset maps fields in header order") {
    const auto records = parse(std::string(kHeader) + "150,300,0.167,231,30,0.2,1.2,45\n");
    REQUIRE(records.size() == 1);
    const auto& r = records[0];
    CHECK(r.d == 150);
    CHECK(r.h == 300);
    CHECK(r.nt == 0.167);
    CHECK(r.ef == 231);
    CHECK(r.fco == 30);
    CHECK(r.eco == 0.2);
    CHECK(r.ecc == 1.2);
    CHECK(r.fcc == 45);
    CHECK_FALSE(r.eps_f_pct.has_value());
}

TEST_CASE("parse_dataset edge cases") {
    SUBCASE("header only") { CHECK(parse(kHeader).empty()); }

    SUBCASE("negative diameter names column d") {
        try {
            parse(std::string(kHeader) + "-1,300,0.167,231,30,0.2,1.2,45\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.column() == "d_mm");
            CHECK(e.row() == 2);
        }
    }

    SUBCASE("non-numeric cell carries row and column") {
        try {
            parse(std::string(kHeader) + "150,300,0.167,231,30,0.2,1.2,45\n150,300,abc,231,30,0.2,1.2,45\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.row() == 3);
            CHECK(e.column() == "nt_mm");
        }
    }

    SUBCASE("missing header column is named") {
        try {
            parse("d_mm,h_mm,nt_mm,ef_gpa,fco_mpa,eco_pct,fcc_mpa\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.column() == "ecc_pct");
        }
    }

    SUBCASE("wrong cell count") { CHECK_THROWS_AS(parse(std::string(kHeader) + "150,300\n"), ParseError); }
    SUBCASE("unknown column") { CHECK_THROWS_AS(parse(std::string("x,") + kHeader), ParseError); }
    SUBCASE("height below diameter") {
        CHECK_THROWS_AS(parse(std::string(kHeader) + "150,100,0.167,231,30,0.2,1.2,45\n"), ParseError);
    }

    SUBCASE("optional rupture columns, blank allowed") {
        const auto rs = parse("d_mm,h_mm,nt_mm,ef_gpa,fco_mpa,eco_pct,ecc_pct,fcc_mpa,eps_f_pct,eps_h_rup_pct\n"
                              "150,300,0.167,231,30,0.2,1.2,45,1.5,\n"
                              "150,300,0.167,231,30,0.2,1.2,45,,0.9\n");
        REQUIRE(rs.size() == 2);
        CHECK(rs[0].eps_f_pct == 1.5);
        CHECK_FALSE(rs[0].eps_h_rup_pct.has_value());
        CHECK(rs[1].eps_h_rup_pct == 0.9);
    }
}

TEST_CASE("write_dataset round-trips through parse_dataset") {
    auto records = random_records(50, 3);
    records[4].eps_f_pct = 1.55;
    std::ostringstream out;
    write_dataset(out, records);
    const auto back = parse(out.str());
    CHECK(back == records);
}

TEST_CASE("validate_ranges flags only values outside the reference ranges") {
    SpecimenRecord at_means;
    for (Field f : kAllFields) at_means.set(f, kReferenceMeans[static_cast<std::size_t>(f)]);

    SUBCASE("minimum diameter is not flagged") {
        auto r = at_means;
        r.d = 51;
        CHECK(validate_ranges(std::vector{r}).clean());
    }
    SUBCASE("fco above the maximum is flagged") {
        auto r = at_means;
        r.fco = 200;
        const auto report = validate_ranges(std::vector{r});
        REQUIRE(report.out_of_range.size() == 1);
        CHECK(report.out_of_range[0].field == Field::Fco);
        CHECK(report.out_of_range[0].range.max == 188.2);
    }
    SUBCASE("all-mean record is clean") { CHECK(validate_ranges(std::vector{at_means}).clean()); }
    SUBCASE("fcc below fco is informational") {
        auto r = at_means;
        r.fcc = r.fco - 1;
        const auto report = validate_ranges(std::vector{r});
        CHECK(report.strength_below_unconfined.size() == 1);
    }
}

TEST_CASE("summary_stats") {
    SUBCASE("two values") {
        const auto s = column_stats(std::vector<double>{1, 3});
        CHECK(s.mean == 2);
        CHECK(s.median == 2);
        CHECK(s.stdev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(s.range == 2);
    }
    SUBCASE("constant column") {
        const auto s = column_stats(std::vector<double>{5, 5, 5});
        CHECK(s.stdev == 0);
        CHECK(s.cov == 0);
    }
    SUBCASE("reference diameter extremes span 355") {
        const auto s = summary_stats(std::vector{make(51, 30, 40), make(406, 30, 40)});
        CHECK(s[Field::D].range == 355);
    }
    SUBCASE("fewer than two records") { CHECK_THROWS_AS(summary_stats(std::vector{make(51, 30, 40)}), ValidationError); }

    SUBCASE("brute-force recomputation on a small set") {
        const auto records = random_records(9, 11);
        const auto s = summary_stats(records);
        for (Field f : kAllFields) {
            auto v = column(records, f);
            std::sort(v.begin(), v.end());
            double sum = 0;
            for (double x : v) sum += x;
            const double mean = sum / 9;
            double ss = 0;
            for (double x : v) ss += (x - mean) * (x - mean);
            CHECK(s[f].min == v.front());
            CHECK(s[f].max == v.back());
            CHECK(s[f].median == v[4]);
            CHECK(s[f].mean == mean);
            CHECK(s[f].stdev == std::sqrt(ss / 8));
            CHECK(s[f].cov == s[f].stdev / s[f].mean);
            CHECK(s[f].min <= s[f].median);
            CHECK(s[f].median <= s[f].max);
        }
    }
}

TEST_CASE("correlation_matrix") {
    auto records = random_records(40, 5);

    SUBCASE("symmetric, unit diagonal, bounded") {
        const auto m = correlation_matrix(records);
        for (std::size_t i = 0; i < kFieldCount; ++i) {
            CHECK(m[i][i] == 1.0);
            for (std::size_t j = 0; j < kFieldCount; ++j) {
                CHECK(m[i][j] == m[j][i]);
                CHECK(std::abs(m[i][j]) <= 1.0);
            }
        }
    }
    SUBCASE("perfect linear relations") {
        for (auto& r : records) {
            r.h = 2 * r.d;
            r.fcc = 400 - r.fco;
        }
        const auto m = correlation_matrix(records);
        CHECK(m[0][1] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(m[4][7] == doctest::Approx(-1.0).epsilon(1e-14));
    }
    SUBCASE("constant column is named") {
        for (auto& r : records) r.ef = 231;
        try {
            correlation_matrix(records);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("ef_gpa") != std::string::npos);
        }
    }
    SUBCASE("row order does not matter") {
        auto shuffled = records;
        Rng rng(9);
        for (std::size_t i = shuffled.size() - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
        CHECK(correlation_matrix(shuffled) == correlation_matrix(records));
        const auto a = summary_stats(shuffled), b = summary_stats(records);
        for (Field f : kAllFields) {
            CHECK(a[f].mean == b[f].mean);
            CHECK(a[f].stdev == b[f].stdev);
            CHECK(a[f].median == b[f].median);
        }
    }
}

TEST_CASE("normalization") {
    const FeatureBounds d{Field::D, 51, 406};
    CHECK(normalize(51, d) == 0.1);
    CHECK(normalize(406, d) == 0.9);
    CHECK(normalize(228.5, d) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normalize(500, d) > 0.9);  // extrapolates

    SUBCASE("fit_normalizer uses the given records") {
        const auto spec = fit_normalizer(std::vector{make(51, 30, 40), make(406, 60, 90)},
                                         std::vector<Field>{Field::D, Field::Fco});
        REQUIRE(spec.features.size() == 2);
        CHECK(spec.features[0].min == 51);
        CHECK(spec.features[0].max == 406);
        CHECK(spec.target.min == 40);
        CHECK(spec.target.max == 90);
        const auto x = normalized_features(make(406, 30, 40), spec);
        CHECK(x[0] == 0.9);
        CHECK(x[1] == 0.1);
    }
    SUBCASE("constant feature") {
        CHECK_THROWS_AS(fit_normalizer(std::vector{make(51, 30, 40), make(51, 60, 90)}, std::vector<Field>{Field::D}),
                        ValidationError);
    }
    SUBCASE("round trip") {
        Rng rng(17);
        for (int i = 0; i < 10000; ++i) {
            const FeatureBounds b{Field::Fco, rng.uniform(-100, 100), 0};
            const FeatureBounds bb{b.field, b.min, b.min + rng.uniform(1e-3, 500)};
            const double x = rng.uniform(-1000, 1000);
            CHECK(std::abs(denormalize(normalize(x, bb), bb) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
        }
    }
}

TEST_CASE("split") {
    const auto records = random_records(708, 1);

    SUBCASE("sizes") {
        const auto s = split(records, 0.75, 42);
        CHECK(s.train.size() == 531);
        CHECK(s.test.size() == 177);
        CHECK(split(random_records(4, 2), 0.75, 99).train.size() == 3);
    }
    SUBCASE("deterministic") {
        CHECK(split(records, 0.75, 5).train_index == split(records, 0.75, 5).train_index);
        CHECK(split(records, 0.75, 5).train_index != split(records, 0.75, 6).train_index);
    }
    SUBCASE("disjoint and exhaustive for many seeds") {
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            const auto s = split(records, 0.6, seed);
            std::vector<std::size_t> all = s.train_index;
            all.insert(all.end(), s.test_index.begin(), s.test_index.end());
            std::sort(all.begin(), all.end());
            for (std::size_t i = 0; i < all.size(); ++i) REQUIRE(all[i] == i);
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(split(std::vector<SpecimenRecord>{}, 0.75, 1), ValidationError);
        CHECK_THROWS_AS(split(records, 1.0, 1), ValidationError);
        CHECK_THROWS_AS(split(records, 0.0, 1), ValidationError);
    }
}
