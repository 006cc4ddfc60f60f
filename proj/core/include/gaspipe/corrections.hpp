#pragma once

#include <span>
#include <vector>

#include "gaspipe/model.hpp"

namespace gaspipe {

/// First-order corrections (delta p, delta phi) to an adiabatic base field.
struct Corrections {
    std::vector<double> delta_phi;
    std::vector<double> delta_p;
};

/// Pressures fixed at both ends: delta_phi(x) = delta_phi(0) - int_0^x r, with
/// delta_phi(0) chosen so that int phi_base delta_phi dx = 0. Throws
/// DegenerateWeight when int phi_base dx <= 0.
std::vector<double> correction_flux_pp(std::span<const double> x, std::span<const double> phi_base,
                                       std::span<const double> residual);

/// Pressure at x=0, flux at x=L: delta_phi(x) = int_x^L r.
std::vector<double> correction_flux_pphi(std::span<const double> x,
                                         std::span<const double> residual);

/// delta_p(x) = -alpha int_0^x phi_base delta_phi dx' / p_base(x).
std::vector<double> correction_pressure(const PipeModel& pipe, std::span<const double> x,
                                        std::span<const double> p_base,
                                        std::span<const double> phi_base,
                                        std::span<const double> delta_phi);

Corrections perturbative_corrections(const PipeModel& pipe, std::span<const double> x,
                                     std::span<const double> p_base,
                                     std::span<const double> phi_base,
                                     std::span<const double> residual, BcKind kind);

/// base + corrections, as a snapshot.
FieldSnapshot apply_corrections(const FieldSnapshot& base, const Corrections& corrections);

}  // namespace gaspipe
