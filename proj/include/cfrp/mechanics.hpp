#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "cfrp/dataset.hpp"

// Closed-form confinement mechanics. Units: MPa, mm, dimensionless strain.
namespace cfrp::mechanics {

// eps_f / fco^0.125 (Lim et al. genetic-programming fit).
double hoop_rupture_strain(double eps_f, double fco);

// rho_eps = eps_h_rup / eco
double strain_ratio(double eps_h_rup, double eco);

// rho_k = 2 Ef t / ((fco / eco) D)
double stiffness_ratio(double ef_mpa, double t, double fco, double eco, double d);

// Lateral confining pressure f_l = 2 Ef eps_h_rup t / D.
double confinement_stress(double ef_mpa, double eps_h_rup, double t, double d);

double lam_teng(double fco, double f_l);
double miyauchi(double fco, double f_l);

struct EmpiricalModelParams {
    double k = 0;
    double n = 0;
};

// fcc = fco (1 + k (f_l / fco)^n)
double nonlinear_model(double fco, double f_l, const EmpiricalModelParams& params);

struct EurocodeStrains {
    double eps_c1;   // strain at peak stress
    double eps_cu1;  // ultimate strain
};

EurocodeStrains eurocode_strains(double fcm);

struct LamTeng {};
struct Miyauchi {};
struct Nonlinear {
    EmpiricalModelParams params;
};

using EmpiricalModel = std::variant<LamTeng, Miyauchi, Nonlinear>;

std::string model_name(const EmpiricalModel& m);
double strength(const EmpiricalModel& m, double fco, double f_l);

// Rupture strain (dimensionless) for a record: the explicit override,
// else the record's eps_h_rup column, else the hoop-rupture fit applied to its eps_f column.
// Throws ConfigError when none is available.
double rupture_strain(const SpecimenRecord& r, std::optional<double> eps_h_rup = std::nullopt);

// Confined strength of a record under an empirical model. Ef is converted
// from GPa to MPa.
double predict_record(const SpecimenRecord& r, const EmpiricalModel& m,
                      std::optional<double> eps_h_rup = std::nullopt);

}  // namespace cfrp::mechanics
