#pragma once

#include "nriwg/green_integrator.hpp"

#include <array>

namespace nriwg {

// Dipole projection weights of the circular transition dipoles
// e_{1,2} = (e_z +- i e_x)/sqrt(2): half the rate from the z component, half
// from x, nothing along the quantization axis y.
struct DipoleWeights {
    double wx = 0.5;
    double wy = 0.0;
    double wz = 0.5;
    // Coefficient of (Gamma_z - Gamma_x) in the cross-damping term
    // kappa sqrt(Gamma1 Gamma2); also 1/2 from e_n . G . e_n.
    double cross = 0.5;
};

DipoleWeights dipole_projection_weights();

enum class RateClass { radiation, substrate, guided, surface };

// Decay-rate decomposition in gamma0 units. Entries carry the dipole weights,
// so gamma_x + gamma_z = Gamma_n / gamma0 and the all-vacuum stack gives
// gamma_n = 1, kappa = 0.
struct RateBreakdown {
    // [class][pol][component]: pol 0 = p, 1 = s; component 0 = x, 1 = z.
    std::array<std::array<std::array<double, 2>, 2>, 4> entries{};
    double gamma_x = 0;
    double gamma_z = 0;
    double gamma_n = 0;
    double kappa = 0;
    double error = 0;
    bool converged = true;
    std::string guided_method, surface_method;

    double entry(RateClass c, Polarization q, DipoleComponent comp) const
    {
        return entries[(int)c][(int)q][(int)comp];
    }
    double class_total(RateClass c) const
    {
        const auto& e = entries[(int)c];
        return e[0][0] + e[0][1] + e[1][0] + e[1][1];
    }
};

/// Applies the dipole weights to a raw per-component breakdown, sums the
/// component rates and forms kappa = (gamma_z - gamma_x)/gamma_n (degenerate
/// transitions). kappa overshoot beyond [-1,1] by more than 1e-9 or a
/// vanishing total rate is an error.
RateBreakdown assemble(const RawBreakdown& raw);

/// Non-degenerate variant: breakdowns evaluated at omega1 and omega2;
/// kappa_n = (Gamma_nz - Gamma_nx)/sqrt(Gamma1 Gamma2).
struct TwoFrequencyRates {
    RateBreakdown at_omega1, at_omega2;
    double kappa1 = 0, kappa2 = 0;
};
TwoFrequencyRates assemble_two_frequency(const RawBreakdown& raw1, const RawBreakdown& raw2);

} // namespace nriwg
