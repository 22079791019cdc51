#include "cfrp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cfrp/error.hpp"
#include "cfrp/random.hpp"

namespace cfrp {

namespace {

constexpr std::array<std::string_view, kFieldCount> kNames{"d", "h", "nt", "ef", "fco", "eco", "ecc", "fcc"};
constexpr std::array<std::string_view, kFieldCount> kColumns{
    "d_mm", "h_mm", "nt_mm", "ef_gpa", "fco_mpa", "eco_pct", "ecc_pct", "fcc_mpa"};
constexpr std::string_view kEpsFColumn = "eps_f_pct";
constexpr std::string_view kEpsRupColumn = "eps_h_rup_pct";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            return cells;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::optional<double> parse_number(std::string_view cell) {
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
    return value;
}

void require_positive(double v, std::size_t row, std::string_view column) {
    if (!std::isfinite(v) || v <= 0) {
        std::ostringstream os;
        os << "value " << v << " must be positive and finite";
        throw ParseError(row, std::string(column), os.str());
    }
}

}  // namespace

std::string_view field_name(Field f) noexcept { return kNames[static_cast<std::size_t>(f)]; }
std::string_view field_column(Field f) noexcept { return kColumns[static_cast<std::size_t>(f)]; }

std::optional<Field> field_from_name(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kFieldCount; ++i) {
        if (kNames[i] == name || kColumns[i] == name) return static_cast<Field>(i);
    }
    return std::nullopt;
}

double SpecimenRecord::get(Field f) const noexcept {
    switch (f) {
        case Field::D: return d;
        case Field::H: return h;
        case Field::Nt: return nt;
        case Field::Ef: return ef;
        case Field::Fco: return fco;
        case Field::Eco: return eco;
        case Field::Ecc: return ecc;
        case Field::Fcc: return fcc;
    }
    return 0;
}

void SpecimenRecord::set(Field f, double value) noexcept {
    switch (f) {
        case Field::D: d = value; break;
        case Field::H: h = value; break;
        case Field::Nt: nt = value; break;
        case Field::Ef: ef = value; break;
        case Field::Fco: fco = value; break;
        case Field::Eco: eco = value; break;
        case Field::Ecc: ecc = value; break;
        case Field::Fcc: fcc = value; break;
    }
}

void check_record(const SpecimenRecord& r, std::size_t row) {
    for (Field f : kAllFields) require_positive(r.get(f), row, field_column(f));
    if (r.eps_f_pct) require_positive(*r.eps_f_pct, row, kEpsFColumn);
    if (r.eps_h_rup_pct) require_positive(*r.eps_h_rup_pct, row, kEpsRupColumn);
    if (r.h < r.d) throw ParseError(row, "h_mm", "height must not be smaller than diameter");
}

std::vector<SpecimenRecord> parse_dataset(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    // Header: the eight physical columns (any order) plus the optional
    // rupture-strain columns. Anything else is rejected.
    std::vector<int> slot;  // column index -> field index, 8 = eps_f, 9 = eps_h_rup
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw ParseError(1, "header", "missing header");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = split_commas(line);
    std::array<bool, kFieldCount + 2> seen{};
    for (const auto cell : header) {
        int idx = -1;
        for (std::size_t i = 0; i < kFieldCount; ++i) {
            if (kColumns[i] == cell) idx = static_cast<int>(i);
        }
        if (cell == kEpsFColumn) idx = 8;
        if (cell == kEpsRupColumn) idx = 9;
        if (idx < 0) throw ParseError(line_no, std::string(cell), "unknown column");
        if (seen[idx]) throw ParseError(line_no, std::string(cell), "duplicate column");
        seen[idx] = true;
        slot.push_back(idx);
    }
    for (std::size_t i = 0; i < kFieldCount; ++i) {
        if (!seen[i]) throw ParseError(line_no, std::string(kColumns[i]), "missing column");
    }

    std::vector<SpecimenRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != slot.size()) {
            throw ParseError(line_no, "*",
                             "expected " + std::to_string(slot.size()) + " cells, found " +
                                 std::to_string(cells.size()));
        }
        SpecimenRecord r;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const int idx = slot[c];
            const auto name = idx < 8 ? kColumns[idx] : (idx == 8 ? kEpsFColumn : kEpsRupColumn);
            const auto value = parse_number(cells[c]);
            if (!value) {
                if (idx >= 8 && cells[c].empty()) continue;
                throw ParseError(line_no, std::string(name), "not a number: '" + std::string(cells[c]) + "'");
            }
            if (idx < 8) {
                r.set(static_cast<Field>(idx), *value);
            } else if (idx == 8) {
                r.eps_f_pct = *value;
            } else {
                r.eps_h_rup_pct = *value;
            }
        }
        check_record(r, line_no);
        records.push_back(r);
    }
    return records;
}

std::vector<SpecimenRecord> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open dataset '" + path + "'");
    return parse_dataset(in);
}

void write_dataset(std::ostream& out, std::span<const SpecimenRecord> records) {
    const bool with_f = std::any_of(records.begin(), records.end(), [](const auto& r) { return r.eps_f_pct.has_value(); });
    const bool with_rup =
        std::any_of(records.begin(), records.end(), [](const auto& r) { return r.eps_h_rup_pct.has_value(); });

    for (std::size_t i = 0; i < kFieldCount; ++i) out << (i ? "," : "") << kColumns[i];
    if (with_f) out << ',' << kEpsFColumn;
    if (with_rup) out << ',' << kEpsRupColumn;
    out << '\n';

    const auto old_precision = out.precision(17);
    for (const auto& r : records) {
        for (std::size_t i = 0; i < kFieldCount; ++i) out << (i ? "," : "") << r.get(static_cast<Field>(i));
        if (with_f) {
            out << ',';
            if (r.eps_f_pct) out << *r.eps_f_pct;
        }
        if (with_rup) {
            out << ',';
            if (r.eps_h_rup_pct) out << *r.eps_h_rup_pct;
        }
        out << '\n';
    }
    out.precision(old_precision);
}

void save_dataset(const std::string& path, std::span<const SpecimenRecord> records) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write dataset '" + path + "'");
    write_dataset(out, records);
}

ValidationReport validate_ranges(std::span<const SpecimenRecord> records) {
    ValidationReport report;
    report.records = records.size();
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (Field f : kAllFields) {
            const auto range = reference_range(f);
            const double v = records[i].get(f);
            if (v < range.min || v > range.max) report.out_of_range.push_back({i, f, v, range});
        }
        if (records[i].fcc < records[i].fco) report.strength_below_unconfined.push_back(i);
    }
    return report;
}

std::vector<double> column(std::span<const SpecimenRecord> records, Field f) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.get(f));
    return out;
}

FieldStats column_stats(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw ValidationError("summary statistics need at least 2 records");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    FieldStats s;
    s.min = sorted.front();
    s.max = sorted.back();
    s.range = s.max - s.min;
    s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    // Sum in sorted order so the result does not depend on record order.
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
    double ss = 0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.stdev = std::sqrt(ss / static_cast<double>(n - 1));
    s.cov = s.mean != 0 ? s.stdev / s.mean : 0;
    return s;
}

DatasetSummary summary_stats(std::span<const SpecimenRecord> records) {
    if (records.size() < 2) throw ValidationError("summary statistics need at least 2 records");
    DatasetSummary summary;
    summary.count = records.size();
    for (Field f : kAllFields) summary.fields[static_cast<std::size_t>(f)] = column_stats(column(records, f));
    return summary;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("pearson: length mismatch");
    if (x.size() < 2) throw ValidationError("pearson: need at least 2 values");
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
    if (sxx == 0 || syy == 0) throw ValidationError("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(std::span<const SpecimenRecord> records) {
    if (records.size() < 2) throw ValidationError("correlation needs at least 2 records");

    // Canonical record order: shuffled inputs give bitwise-identical sums.
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        for (Field f : kAllFields) {
            const double va = records[a].get(f), vb = records[b].get(f);
            if (va != vb) return va < vb;
        }
        return false;
    });

    std::array<std::vector<double>, kFieldCount> cols;
    for (Field f : kAllFields) {
        auto& c = cols[static_cast<std::size_t>(f)];
        c.reserve(records.size());
        for (auto i : order) c.push_back(records[i].get(f));
        if (std::all_of(c.begin(), c.end(), [&](double v) { return v == c.front(); })) {
            throw ValidationError("column " + std::string(field_column(f)) + " is constant (zero variance)");
        }
    }

    CorrelationMatrix m{};
    for (std::size_t i = 0; i < kFieldCount; ++i) {
        m[i][i] = 1.0;
        for (std::size_t j = i + 1; j < kFieldCount; ++j) {
            m[i][j] = m[j][i] = pearson(cols[i], cols[j]);
        }
    }
    return m;
}

const FeatureBounds* NormalizationSpec::find(Field f) const noexcept {
    for (const auto& b : features) {
        if (b.field == f) return &b;
    }
    return target.field == f ? &target : nullptr;
}

// Written as an interpolation so both endpoints are hit exactly; this is
// the same affine map as X = 0.8/(max-min) * x + (0.9 - 0.8/(max-min) * max).
double normalize(double x, const FeatureBounds& b, double lo, double hi) noexcept {
    const double t = (x - b.min) / (b.max - b.min);
    return (1.0 - t) * lo + t * hi;
}

double denormalize(double z, const FeatureBounds& b, double lo, double hi) noexcept {
    const double t = (z - lo) / (hi - lo);
    return (1.0 - t) * b.min + t * b.max;
}

NormalizationSpec fit_normalizer(std::span<const SpecimenRecord> records, std::span<const Field> features,
                                 Field target) {
    if (records.size() < 2) throw ValidationError("normalizer needs at least 2 records");
    auto bounds_of = [&](Field f) {
        const auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                                  [f](const auto& a, const auto& b) { return a.get(f) < b.get(f); });
        FeatureBounds b{f, lo->get(f), hi->get(f)};
        if (!(b.max > b.min)) {
            throw ValidationError("feature " + std::string(field_name(f)) + " is constant; cannot normalize");
        }
        return b;
    };
    NormalizationSpec spec;
    for (Field f : features) spec.features.push_back(bounds_of(f));
    spec.target = bounds_of(target);
    return spec;
}

std::vector<double> normalized_features(const SpecimenRecord& r, const NormalizationSpec& spec) {
    std::vector<double> x;
    x.reserve(spec.features.size());
    for (const auto& b : spec.features) x.push_back(normalize(r.get(b.field), b, spec.lo, spec.hi));
    return x;
}

Split split(std::span<const SpecimenRecord> records, double train_fraction, std::uint64_t seed) {
    if (records.empty()) throw ValidationError("split: empty dataset");
    if (!(train_fraction > 0 && train_fraction < 1)) throw ValidationError("split: train fraction must be in (0, 1)");

    const std::size_t n = records.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.below(i + 1)]);

    const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
    Split s;
    s.train_index.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test_index.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    for (auto i : s.train_index) s.train.push_back(records[i]);
    for (auto i : s.test_index) s.test.push_back(records[i]);
    return s;
}

}  // namespace cfrp
