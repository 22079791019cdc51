#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfrp {

// The eight physical columns of the specimen database, in file order.
enum class Field : std::size_t { D = 0, H, Nt, Ef, Fco, Eco, Ecc, Fcc };

inline constexpr std::size_t kFieldCount = 8;

inline constexpr std::array<Field, kFieldCount> kAllFields{
    Field::D, Field::H, Field::Nt, Field::Ef, Field::Fco, Field::Eco, Field::Ecc, Field::Fcc};

// Default network inputs: every column except the target.
inline constexpr std::array<Field, 7> kDefaultFeatures{
    Field::D, Field::H, Field::Nt, Field::Ef, Field::Fco, Field::Eco, Field::Ecc};

// Short name used on the command line and in reports ("d", "fco", ...).
std::string_view field_name(Field f) noexcept;
// CSV header name ("d_mm", "fco_mpa", ...).
std::string_view field_column(Field f) noexcept;
std::optional<Field> field_from_name(std::string_view name) noexcept;

// One CFRP-confined cylinder. Units as stored in files: mm, GPa, MPa, and
// strains in percent. The two optional columns carry the jacket rupture
// source needed by the empirical baselines.
struct SpecimenRecord {
    double d = 0;    // diameter, mm
    double h = 0;    // height, mm
    double nt = 0;   // total CFRP thickness, mm
    double ef = 0;   // CFRP modulus, GPa
    double fco = 0;  // unconfined strength, MPa
    double eco = 0;  // unconfined strain, %
    double ecc = 0;  // confined strain, %
    double fcc = 0;  // confined strength, MPa
    std::optional<double> eps_f_pct;      // fiber ultimate strain, %
    std::optional<double> eps_h_rup_pct;  // measured hoop rupture strain, %

    double get(Field f) const noexcept;
    void set(Field f, double value) noexcept;

    bool operator==(const SpecimenRecord&) const = default;
};

struct FieldRange {
    double min;
    double max;
};

// Observed bounds of the reference 708-specimen database.
inline constexpr std::array<FieldRange, kFieldCount> kReferenceRanges{{
    {51, 406},
    {102, 812},
    {0.09, 5.9},
    {10, 663},
    {12.41, 188.2},
    {0.1676, 1.53},
    {0.083, 4.62},
    {18.5, 302.2},
}};

inline constexpr FieldRange reference_range(Field f) noexcept {
    return kReferenceRanges[static_cast<std::size_t>(f)];
}

// Reference-database means, useful as a typical specimen.
inline constexpr std::array<double, kFieldCount> kReferenceMeans{
    153.34, 306.45, 0.89, 174.68, 42.48, 0.27, 1.54, 76.25};

// Throws ValidationError when a record breaks a hard invariant
// (non-positive/non-finite field, h < d). `row` is used in the message.
void check_record(const SpecimenRecord& r, std::size_t row);

std::vector<SpecimenRecord> parse_dataset(std::istream& in);
std::vector<SpecimenRecord> load_dataset(const std::string& path);
void write_dataset(std::ostream& out, std::span<const SpecimenRecord> records);
void save_dataset(const std::string& path, std::span<const SpecimenRecord> records);

struct RangeFlag {
    std::size_t record;  // 0-based index into the input sequence
    Field field;
    double value;
    FieldRange range;
};

struct ValidationReport {
    std::size_t records = 0;
    std::vector<RangeFlag> out_of_range;
    std::vector<std::size_t> strength_below_unconfined;  // fcc < fco, informational

    bool clean() const noexcept { return out_of_range.empty(); }
};

ValidationReport validate_ranges(std::span<const SpecimenRecord> records);

struct FieldStats {
    double min = 0;
    double max = 0;
    double range = 0;
    double mean = 0;
    double median = 0;
    double stdev = 0;  // sample (n - 1) convention
    double cov = 0;
};

struct DatasetSummary {
    std::size_t count = 0;
    std::array<FieldStats, kFieldCount> fields{};

    const FieldStats& operator[](Field f) const { return fields[static_cast<std::size_t>(f)]; }
};

FieldStats column_stats(std::span<const double> values);
DatasetSummary summary_stats(std::span<const SpecimenRecord> records);

using CorrelationMatrix = std::array<std::array<double, kFieldCount>, kFieldCount>;

double pearson(std::span<const double> x, std::span<const double> y);
CorrelationMatrix correlation_matrix(std::span<const SpecimenRecord> records);

std::vector<double> column(std::span<const SpecimenRecord> records, Field f);

// Affine map of one column onto [lo, hi].
struct FeatureBounds {
    Field field;
    double min;
    double max;

    bool operator==(const FeatureBounds&) const = default;
};

struct NormalizationSpec {
    std::vector<FeatureBounds> features;  // network inputs, in input order
    FeatureBounds target{Field::Fcc, 0, 1};
    double lo = 0.1;
    double hi = 0.9;

    const FeatureBounds* find(Field f) const noexcept;
    bool operator==(const NormalizationSpec&) const = default;
};

double normalize(double x, const FeatureBounds& b, double lo = 0.1, double hi = 0.9) noexcept;
double denormalize(double z, const FeatureBounds& b, double lo = 0.1, double hi = 0.9) noexcept;

// Bounds come from `records` only; callers pass the training partition.
NormalizationSpec fit_normalizer(std::span<const SpecimenRecord> records,
                                 std::span<const Field> features, Field target = Field::Fcc);

// Normalized input vector of one record, in spec.features order.
std::vector<double> normalized_features(const SpecimenRecord& r, const NormalizationSpec& spec);

struct Split {
    std::vector<SpecimenRecord> train;
    std::vector<SpecimenRecord> test;
    std::vector<std::size_t> train_index;
    std::vector<std::size_t> test_index;
};

// Seeded Fisher-Yates shuffle of the indices, then a prefix of
// round(n * train_fraction) records goes to training.
Split split(std::span<const SpecimenRecord> records, double train_fraction, std::uint64_t seed);

}  // namespace cfrp
