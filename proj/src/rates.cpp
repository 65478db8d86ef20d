#include "nriwg/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace nriwg {

DipoleWeights dipole_projection_weights()
{
    return DipoleWeights{};
}

RateBreakdown assemble(const RawBreakdown& raw)
{
    const DipoleWeights w = dipole_projection_weights();

    auto check = [](const ClassRates& c, const char* name) {
        for (double v : {c.x_p, c.x_s, c.z_p}) {
            if (!std::isfinite(v))
                throw std::invalid_argument(std::string("assemble: non-finite entry in ") + name);
            if (v < -1e-9)
                throw std::invalid_argument(std::string("assemble: negative rate in ") + name);
        }
    };
    check(raw.radiation, "radiation");
    check(raw.substrate, "substrate");
    check(raw.guided, "guided");
    check(raw.evanescent, "surface");

    RateBreakdown out;
    auto put = [&](RateClass cls, const ClassRates& c) {
        out.entries[(int)cls][(int)Polarization::p][(int)DipoleComponent::x] = w.wx * c.x_p;
        out.entries[(int)cls][(int)Polarization::s][(int)DipoleComponent::x] = w.wx * c.x_s;
        out.entries[(int)cls][(int)Polarization::p][(int)DipoleComponent::z] = w.wz * c.z_p;
        out.entries[(int)cls][(int)Polarization::s][(int)DipoleComponent::z] = 0.0;
        out.error += c.error;
        out.converged = out.converged && c.converged;
    };
    put(RateClass::radiation, raw.radiation);
    put(RateClass::substrate, raw.substrate);
    put(RateClass::guided, raw.guided);
    put(RateClass::surface, raw.evanescent);
    out.guided_method = raw.guided.method;
    out.surface_method = raw.evanescent.method;

    for (const auto& cls : out.entries)
        for (const auto& pol : cls) {
            out.gamma_x += pol[(int)DipoleComponent::x];
            out.gamma_z += pol[(int)DipoleComponent::z];
        }
    out.gamma_n = out.gamma_x + out.gamma_z;
    if (out.gamma_n <= 0)
        throw std::domain_error("assemble: total rate vanished, kappa undefined");

    double kappa = (out.gamma_z - out.gamma_x) / out.gamma_n;
    if (std::abs(kappa) > 1.0) {
        if (std::abs(kappa) > 1.0 + 1e-9)
            throw std::domain_error("assemble: |kappa| exceeds 1 beyond tolerance");
        kappa = std::copysign(1.0, kappa);
    }
    out.kappa = kappa;
    return out;
}

TwoFrequencyRates assemble_two_frequency(const RawBreakdown& raw1, const RawBreakdown& raw2)
{
    TwoFrequencyRates out;
    out.at_omega1 = assemble(raw1);
    out.at_omega2 = assemble(raw2);
    const double g12 = std::sqrt(out.at_omega1.gamma_n * out.at_omega2.gamma_n);
    out.kappa1 = (out.at_omega1.gamma_z - out.at_omega1.gamma_x) / g12;
    out.kappa2 = (out.at_omega2.gamma_z - out.at_omega2.gamma_x) / g12;
    return out;
}

} // namespace nriwg
