#include "gaspipe/corrections.hpp"

#include <string>

#include "gaspipe/errors.hpp"
#include "gaspipe/numerics.hpp"

namespace gaspipe {

std::vector<double> correction_flux_pp(std::span<const double> x, std::span<const double> phi_base,
                                       std::span<const double> residual) {
    const auto running = numerics::cumulative_integral(x, residual);
    const double weight = numerics::integral(x, phi_base);
    if (!(weight > 0.0)) {
        throw DegenerateWeight("integral of the base flux is not positive (" +
                               std::to_string(weight) + ")");
    }
    std::vector<double> weighted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        weighted[i] = phi_base[i] * running[i];
    }
    const double inlet = numerics::integral(x, weighted) / weight;
    std::vector<double> delta(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        delta[i] = inlet - running[i];
    }
    return delta;
}

std::vector<double> correction_flux_pphi(std::span<const double> x,
                                         std::span<const double> residual) {
    auto delta = numerics::reverse_cumulative_integral(x, residual);
    delta.back() = 0.0;
    return delta;
}

std::vector<double> correction_pressure(const PipeModel& pipe, std::span<const double> x,
                                        std::span<const double> p_base,
                                        std::span<const double> phi_base,
                                        std::span<const double> delta_phi) {
    if (p_base.size() != x.size() || phi_base.size() != x.size() || delta_phi.size() != x.size()) {
        throw AlignmentError("correction arrays misaligned");
    }
    std::vector<double> product(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        product[i] = phi_base[i] * delta_phi[i];
    }
    auto running = numerics::cumulative_integral(x, product);
    for (std::size_t i = 0; i < x.size(); ++i) {
        running[i] *= -pipe.alpha / p_base[i];
    }
    running.front() = 0.0;
    return running;
}

Corrections perturbative_corrections(const PipeModel& pipe, std::span<const double> x,
                                     std::span<const double> p_base,
                                     std::span<const double> phi_base,
                                     std::span<const double> residual, BcKind kind) {
    Corrections out;
    out.delta_phi = kind == BcKind::PP ? correction_flux_pp(x, phi_base, residual)
                                       : correction_flux_pphi(x, residual);
    out.delta_p = correction_pressure(pipe, x, p_base, phi_base, out.delta_phi);
    return out;
}

FieldSnapshot apply_corrections(const FieldSnapshot& base, const Corrections& corrections) {
    if (corrections.delta_p.size() != base.size() || corrections.delta_phi.size() != base.size()) {
        throw AlignmentError("corrections do not match the base grid");
    }
    FieldSnapshot out = base;
    for (std::size_t i = 0; i < base.size(); ++i) {
        out.p[i] += corrections.delta_p[i];
        out.phi[i] += corrections.delta_phi[i];
    }
    return out;
}

}  // namespace gaspipe
