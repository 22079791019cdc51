// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cfrp/cli.hpp"
#include "cfrp/dataset.hpp"
#include "cfrp/experiment.hpp"
#include "cfrp/mechanics.hpp"
#include "cfrp/metrics.hpp"
#include "cfrp/neuralnet.hpp"
#include "cfrp/optimizers.hpp"
#include "cfrp/random.hpp"

using namespace cfrp;
namespace fs = std::filesystem;
namespace ex = cfrp::experiment;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

int failures = 0;

void report(int id, const char* title, Verdict& v) {
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.str().c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

// 1 ------------------------------------------------------------------------

void formula_oracles() {
    Verdict v;
    const auto start = Clock::now();
    const double hoop = mechanics::hoop_rupture_strain(0.015, 40);
    const double fl = mechanics::confinement_stress(231000, 0.01, 0.167, 150);
    const double lt = mechanics::lam_teng(30, 10);
    const double my = mechanics::miyauchi(30, 10);
    const auto ec = mechanics::eurocode_strains(12.5);
    const double elapsed = seconds_since(start);

    // Hand calculations, evaluated independently of the library.
    const double hoop_ref = 0.015 / std::exp(0.125 * std::log(40.0));
    const double fl_ref = 2.0 * 231000 * 0.01 * 0.167 / 150;
    const double lt_ref = 30 + 3.3 * 10;
    const double my_ref = 30 + 3.485 * 10;
    const double c1_ref = 0.0014 * (2 - std::exp(-0.3) - std::exp(-1.75));
    const double cu1_ref = 0.004 - 0.0011 * (1 - std::exp(-0.26875));

    const double tol = 1e-4;
    v.require(rel_close(hoop, hoop_ref, tol) && rel_close(hoop, 0.009459, tol), "hoop_rupture_strain");
    v.require(rel_close(fl, fl_ref, tol) && rel_close(fl, 5.1436, tol), "confinement_stress");
    v.require(rel_close(lt, lt_ref, tol) && rel_close(lt, 63.0, tol), "lam_teng");
    v.require(rel_close(my, my_ref, tol) && rel_close(my, 64.85, tol), "miyauchi");
    v.require(rel_close(ec.eps_c1, c1_ref, tol) && rel_close(ec.eps_c1, 0.0015196, tol), "eps_c1");
    v.require(rel_close(ec.eps_cu1, cu1_ref, tol) && rel_close(ec.eps_cu1, 0.0037408, tol), "eps_cu1");
    v.require(elapsed < 1e-3, "runtime");
    v.detail << "hoop " << hoop << ", f_l " << fl << " MPa, lam_teng " << lt << ", miyauchi " << my << ", eurocode ("
             << ec.eps_c1 << ", " << ec.eps_cu1 << "), " << elapsed * 1e6 << " us";
    report(1, "formula oracles", v);
}

// 2 ------------------------------------------------------------------------

void normalization_contract() {
    Verdict v;
    SpecimenRecord lo, hi;
    for (Field f : kAllFields) {
        lo.set(f, reference_range(f).min);
        hi.set(f, reference_range(f).max);
    }
    const std::vector<SpecimenRecord> extremes{lo, hi};
    const std::vector<Field> features(kDefaultFeatures.begin(), kDefaultFeatures.end());
    const auto spec = fit_normalizer(extremes, features);

    std::vector<FeatureBounds> all = spec.features;
    all.push_back(spec.target);
    bool endpoints = true;
    for (const auto& b : all) {
        endpoints = endpoints && normalize(b.min, b) == 0.1 && normalize(b.max, b) == 0.9;
    }
    v.require(endpoints, "endpoints");

    Rng rng(2);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto& b = all[rng.below(all.size())];
        const double x = rng.uniform(b.min, b.max);
        worst = std::max(worst, std::abs(denormalize(normalize(x, b), b) - x));
    }
    v.require(worst <= 1e-12, "round trip");
    v.detail << "8 features map to 0.1/0.9 exactly: " << (endpoints ? "yes" : "no") << ", max round-trip error "
             << worst;
    report(2, "normalization contract", v);
}

// 3 ------------------------------------------------------------------------

double batch_mse(const nn::Topology& t, std::span<const double> w, const nn::TrainingSet& data) {
    double s = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double e = nn::forward(t, w, data.input(i))[0] - data.target(i)[0];
        s += e * e;
    }
    return s / static_cast<double>(data.size());
}

void gradient_check() {
    Verdict v;
    const auto start = Clock::now();
    nn::Topology t;
    t.input_size = 3;
    t.hidden_sizes = {5};
    const double h = 1e-6;
    double worst = 0;
    for (std::uint64_t net = 0; net < 10; ++net) {
        Rng rng(500 + net);
        auto w = nn::init_weights(t, net, 1.0);
        nn::TrainingSet batch{3, 1, {}, {}};
        for (int s = 0; s < 10; ++s) {
            const std::vector<double> x{rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};
            batch.add(x, std::vector<double>{rng.uniform(0.1, 0.9)});
        }
        const auto g = nn::gradient(t, w, batch);
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double saved = w[k];
            w[k] = saved + h;
            const double up = batch_mse(t, w, batch);
            w[k] = saved - h;
            const double down = batch_mse(t, w, batch);
            w[k] = saved;
            const double fd = (up - down) / (2 * h);
            worst = std::max(worst, std::abs(fd - g.values[k]) / std::max(1e-3, std::abs(fd)));
        }
    }
    const double elapsed = seconds_since(start);
    v.require(worst <= 1e-5, "relative error");
    v.require(elapsed < 1.0, "runtime");
    v.detail << "10 nets 3-[5]-1, max relative error " << worst << ", " << elapsed << " s";
    report(3, "gradient correctness", v);
}

// 4 ------------------------------------------------------------------------

void optimizer_sanity() {
    Verdict v;
    const auto start = Clock::now();
    const auto space = opt::SearchSpace::box(10, -5.12, 5.12);
    const opt::Objective sphere = [](std::span<const double> x) {
        double s = 0;
        for (double e : x) s += e * e;
        return s;
    };
    auto monotone = [](const opt::OptimizationTrace& t) {
        return std::is_sorted(t.best_fitness.rbegin(), t.best_fitness.rend());
    };

    const opt::PsoConfig pso;
    const opt::GwoConfig gwo;
    const opt::BaConfig ba;
    const auto p1 = opt::pso_run(pso, space, sphere);
    const auto g1 = opt::gwo_run(gwo, space, sphere);
    const auto b1 = opt::ba_run(ba, space, sphere);
    const auto p2 = opt::pso_run(pso, space, sphere);
    const auto g2 = opt::gwo_run(gwo, space, sphere);
    const auto b2 = opt::ba_run(ba, space, sphere);
    const double elapsed = seconds_since(start);

    v.require(pso.population == 70 && gwo.population == 75 && ba.population == 80, "populations");
    v.require(p1.best_fitness.size() == 900 && g1.best_fitness.size() == 900 && b1.best_fitness.size() == 900,
              "iterations");
    v.require(p1.final_fitness < 1e-3, "pso < 1e-3");
    v.require(g1.final_fitness < 1e-3, "gwo < 1e-3");
    v.require(b1.final_fitness < 0.1, "ba < 0.1");
    v.require(monotone(p1) && monotone(g1) && monotone(b1), "monotone traces");
    v.require(p1.best_fitness == p2.best_fitness && g1.best_fitness == g2.best_fitness &&
                  b1.best_fitness == b2.best_fitness,
              "bitwise reproducible");
    v.require(elapsed < 30, "runtime");
    v.detail << "pso " << p1.final_fitness << ", gwo " << g1.final_fitness << ", ba " << b1.final_fitness << ", "
             << elapsed << " s for 6 runs";
    report(4, "optimizer sanity", v);
}

// 5 and 6 ------------------------------------------------------------------

double r2_of(const ex::ExperimentResult& r, const std::string& name) {
    for (const auto& row : r.table) {
        if (row.model == name && row.ok && row.r_squared) return *row.r_squared;
    }
    return std::nan("");
}

void synthetic_reproduction(const std::vector<SpecimenRecord>& records, const ex::ExperimentResult& result,
                            const ex::ExperimentConfig& config, double elapsed) {
    Verdict v;
    const double pso = r2_of(result, "pso"), gwo = r2_of(result, "gwo"), ann = r2_of(result, "ann"),
                 lt = r2_of(result, "lam_teng");
    v.require(pso >= 0.95, "pso >= 0.95");
    v.require(gwo >= 0.93, "gwo >= 0.93");
    v.require(ann >= 0.90, "ann >= 0.90");
    v.require(lt >= 0.99, "lam_teng >= 0.99");

    // The backprop run must end below its starting loss.
    const auto parts = split(records, config.train_fraction, config.seed);
    const auto normalizer = fit_normalizer(parts.train, config.features);
    const auto data = ex::make_training_set(parts.train, normalizer);
    auto topology = config.topology;
    topology.input_size = config.features.size();
    const auto w0 = nn::init_weights(topology, ex::model_seed(config.seed, "ann"), config.ann.init_scale);
    const double initial = batch_mse(topology, w0, data);
    double final_loss = std::nan("");
    for (const auto& o : result.outcomes) {
        if (o.name == "ann" && !o.trace.empty()) final_loss = o.trace.back();
    }
    v.require(final_loss <= initial, "ann final loss <= initial loss");
    v.require(elapsed < 600, "runtime");

    v.detail << "test R^2 pso " << pso << ", gwo " << gwo << ", ann " << ann << ", lam_teng " << lt << ", ba "
             << r2_of(result, "ba") << "; ann loss " << initial << " -> " << final_loss << "; " << elapsed << " s";
    report(5, "end-to-end synthetic reproduction", v);
}

void ba_ordering(const std::vector<std::pair<std::uint64_t, ex::ExperimentResult>>& runs) {
    Verdict v;
    int wins = 0;
    for (const auto& [seed, r] : runs) {
        const double ba = r2_of(r, "ba"), pso = r2_of(r, "pso"), gwo = r2_of(r, "gwo");
        const bool ok = ba <= pso && ba <= gwo;
        wins += ok;
        v.detail << "seed " << seed << ": ba " << ba << " pso " << pso << " gwo " << gwo << (ok ? " ok" : " violated")
                 << "; ";
    }
    v.require(2 * wins > static_cast<int>(runs.size()), "majority");
    report(6, "BA ranks below PSO and GWO", v);
}

// 7 ------------------------------------------------------------------------

void metric_oracles() {
    Verdict v;
    Rng rng(77);
    double worst = 0, worst_affine = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.below(100);
        std::vector<double> y(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.uniform(10, 300);
            p[i] = y[i] + 20 * rng.normal();
        }
        long double se = 0, ae = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const long double d = (long double)y[i] - p[i];
            se += d * d;
            ae += std::fabs(d);
            sx += y[i];
            sy += p[i];
            sxx += (long double)y[i] * y[i];
            syy += (long double)p[i] * p[i];
            sxy += (long double)y[i] * p[i];
        }
        const long double N = n;
        const long double r = (N * sxy - sx * sy) / std::sqrt((N * sxx - sx * sx) * (N * syy - sy * sy));
        const double mse_ref = static_cast<double>(se / N), mae_ref = static_cast<double>(ae / N),
                     r2_ref = static_cast<double>(r * r);
        const double r2 = metrics::r_squared(y, p);
        worst = std::max({worst, std::abs(metrics::mse(y, p) - mse_ref) / mse_ref,
                          std::abs(metrics::mae(y, p) - mae_ref) / mae_ref, std::abs(r2 - r2_ref) / r2_ref});

        const double a = rng.uniform(-3, 3), b = rng.uniform(-50, 50);
        std::vector<double> pa(n);
        for (std::size_t i = 0; i < n; ++i) pa[i] = a * p[i] + b;
        if (std::abs(a) > 1e-3) worst_affine = std::max(worst_affine, std::abs(metrics::r_squared(y, pa) - r2));
    }
    v.require(worst <= 1e-12, "naive oracle");
    v.require(worst_affine <= 1e-12, "affine invariance");
    v.detail << "1000 random pairs, max relative deviation " << worst << ", max affine r^2 shift " << worst_affine;
    report(7, "metric oracle equivalence", v);
}

// 8 ------------------------------------------------------------------------

void sweep_monotonicity(const std::vector<SpecimenRecord>& records) {
    Verdict v;
    const auto base = ex::median_record(records);
    const std::vector<mechanics::EmpiricalModel> models{mechanics::LamTeng{}, mechanics::Miyauchi{},
                                                        mechanics::Nonlinear{{2.2, 0.85}}};
    std::size_t grids = 0;
    for (const auto& m : models) {
        const ex::Model model{mechanics::model_name(m), ex::EmpiricalPredictor{m, std::nullopt}};
        for (const ex::SweepSpec& s : {ex::SweepSpec{Field::Nt, 0.15, 1.05, 10, ""},
                                       ex::SweepSpec{Field::Ef, 110, 245, 10, ""},
                                       ex::SweepSpec{Field::Nt, 0.15, 1.05, 200, ""},
                                       ex::SweepSpec{Field::Ef, 110, 245, 200, ""}}) {
            const auto g = ex::parametric_sweep(model, base, s);
            bool inc = g.predictions.size() == s.steps;
            for (std::size_t i = 1; i < g.predictions.size(); ++i) inc = inc && g.predictions[i] > g.predictions[i - 1];
            v.require(inc, model.name + " " + std::string(field_name(s.var)));
            if (s.steps == 10) {
                v.detail << model.name << " " << field_name(s.var) << " +" << g.percent_change << "%; ";
            }
            ++grids;
        }
    }
    v.detail << grids << " grids strictly increasing: " << (v.pass ? "yes" : "no");
    report(8, "sweep monotonicity", v);
}

// 9 ------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void reproducibility() {
    Verdict v;
    const auto dir = fs::temp_directory_path() / "cfrp_acceptance_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);
    save_dataset((dir / "data.csv").string(), ex::synth_dataset(200, 1, 0.02));
    std::ofstream(dir / "config.json") << R"({
  "dataset": "data.csv",
  "topology": {"hidden_sizes": [10]},
  "ann": {"epochs": 100},
  "pso": {"iterations": 40},
  "gwo": {"iterations": 40},
  "ba": {"iterations": 40},
  "sweeps": [{"var": "fco", "from": 5, "to": 50, "steps": 10}]
})";

    int codes[2];
    for (int run = 0; run < 2; ++run) {
        std::ostringstream out, err;
        const auto out_dir = dir / ("run" + std::to_string(run));
        codes[run] = cli::run({"cfrp", "--quiet", "--out", out_dir.string(), "compare", (dir / "config.json").string()},
                              out, err);
    }
    v.require(codes[0] == 0 && codes[1] == 0, "exit codes");

    std::size_t files = 0, identical = 0;
    for (const auto& entry : fs::directory_iterator(dir / "run0")) {
        ++files;
        const auto twin = dir / "run1" / entry.path().filename();
        if (fs::exists(twin) && slurp(entry.path()) == slurp(twin)) ++identical;
    }
    std::size_t files_b = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir / "run1")) ++files_b;
    v.require(files > 0 && files == files_b && identical == files, "byte-identical reports");
    v.detail << identical << " of " << files << " report files byte-identical";
    fs::remove_all(dir);
    report(9, "compare reproducibility", v);
}

}  // namespace

int main() {
    formula_oracles();
    normalization_contract();
    gradient_check();
    optimizer_sanity();
    metric_oracles();

    const auto records = ex::synth_dataset(708, 1, 0.02);
    sweep_monotonicity(records);
    reproducibility();

    ex::ExperimentConfig config;
    config.roster = {{ex::ModelKind::Pso}, {ex::ModelKind::Gwo}, {ex::ModelKind::Ba},
                     {ex::ModelKind::Ann}, {ex::ModelKind::LamTeng}, {ex::ModelKind::Miyauchi}};
    config.seed = 1;
    auto start = Clock::now();
    const auto main_run = ex::run_experiment(config, records);
    synthetic_reproduction(records, main_run, config, seconds_since(start));

    std::vector<std::pair<std::uint64_t, ex::ExperimentResult>> runs;
    runs.emplace_back(1, main_run);
    auto ordering = config;
    ordering.roster = {{ex::ModelKind::Pso}, {ex::ModelKind::Gwo}, {ex::ModelKind::Ba}};
    for (std::uint64_t seed : {2, 3}) {
        ordering.seed = seed;
        runs.emplace_back(seed, ex::run_experiment(ordering, records));
    }
    ba_ordering(runs);

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
