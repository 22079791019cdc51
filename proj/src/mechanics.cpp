#include "cfrp/mechanics.hpp"

#include <cmath>
#include <sstream>

#include "cfrp/error.hpp"

namespace cfrp::mechanics {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << what << " must be positive, got " << v;
        throw DomainError(os.str());
    }
}

void require_non_negative(double v, const char* what) {
    if (!(v >= 0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << what << " must be non-negative, got " << v;
        throw DomainError(os.str());
    }
}

}  // namespace

double hoop_rupture_strain(double eps_f, double fco) {
    require_positive(eps_f, "eps_f");
    require_positive(fco, "fco");
    return eps_f / std::pow(fco, 0.125);
}

double strain_ratio(double eps_h_rup, double eco) {
    require_non_negative(eps_h_rup, "eps_h_rup");
    require_positive(eco, "eco");
    return eps_h_rup / eco;
}

double stiffness_ratio(double ef_mpa, double t, double fco, double eco, double d) {
    require_positive(ef_mpa, "ef");
    require_positive(t, "t");
    require_positive(fco, "fco");
    require_positive(eco, "eco");
    require_positive(d, "d");
    return 2.0 * ef_mpa * t / ((fco / eco) * d);
}

double confinement_stress(double ef_mpa, double eps_h_rup, double t, double d) {
    require_positive(ef_mpa, "ef");
    require_non_negative(eps_h_rup, "eps_h_rup");
    require_positive(t, "t");
    require_positive(d, "d");
    return 2.0 * ef_mpa * eps_h_rup * t / d;
}

double lam_teng(double fco, double f_l) {
    require_positive(fco, "fco");
    require_non_negative(f_l, "f_l");
    return fco * (1.0 + 3.3 * f_l / fco);
}

double miyauchi(double fco, double f_l) {
    require_positive(fco, "fco");
    require_non_negative(f_l, "f_l");
    return fco * (1.0 + 3.485 * f_l / fco);
}

double nonlinear_model(double fco, double f_l, const EmpiricalModelParams& params) {
    require_positive(fco, "fco");
    require_non_negative(f_l, "f_l");
    require_positive(params.k, "k");
    require_positive(params.n, "n");
    return fco * (1.0 + params.k * std::pow(f_l / fco, params.n));
}

EurocodeStrains eurocode_strains(double fcm) {
    require_positive(fcm, "fcm");
    return {0.0014 * (2.0 - std::exp(-0.024 * fcm) - std::exp(-0.140 * fcm)),
            0.004 - 0.0011 * (1.0 - std::exp(-0.0215 * fcm))};
}

std::string model_name(const EmpiricalModel& m) {
    struct Visitor {
        std::string operator()(const LamTeng&) const { return "lam_teng"; }
        std::string operator()(const Miyauchi&) const { return "miyauchi"; }
        std::string operator()(const Nonlinear&) const { return "nonlinear"; }
    };
    return std::visit(Visitor{}, m);
}

double strength(const EmpiricalModel& m, double fco, double f_l) {
    struct Visitor {
        double fco, f_l;
        double operator()(const LamTeng&) const { return lam_teng(fco, f_l); }
        double operator()(const Miyauchi&) const { return miyauchi(fco, f_l); }
        double operator()(const Nonlinear& nl) const { return nonlinear_model(fco, f_l, nl.params); }
    };
    return std::visit(Visitor{fco, f_l}, m);
}

double rupture_strain(const SpecimenRecord& r, std::optional<double> eps_h_rup) {
    if (eps_h_rup) return *eps_h_rup;
    if (r.eps_h_rup_pct) return *r.eps_h_rup_pct / 100.0;
    if (r.eps_f_pct) return hoop_rupture_strain(*r.eps_f_pct / 100.0, r.fco);
    throw ConfigError("no hoop rupture strain source: supply eps_h_rup_pct or eps_f_pct");
}

double predict_record(const SpecimenRecord& r, const EmpiricalModel& m, std::optional<double> eps_h_rup) {
    const double eps = rupture_strain(r, eps_h_rup);
    const double f_l = confinement_stress(r.ef * 1000.0, eps, r.nt, r.d);
    return strength(m, r.fco, f_l);
}

}  // namespace cfrp::mechanics
