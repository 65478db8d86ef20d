#include "nriwg/materials.hpp"

#include <cmath>
#include <stdexcept>

namespace nriwg {

MaterialModel MaterialModel::make_fixed(cplx eps, cplx mu)
{
    MaterialModel m;
    m.kind = Kind::fixed;
    m.eps = eps;
    m.mu = mu;
    return m;
}

MaterialModel MaterialModel::make_drude_lorentz(double omega_pe, double omega_te, double gamma_e,
                                                double omega_pm, double omega_tm, double gamma_m)
{
    if (omega_te <= 0 || omega_tm <= 0)
        throw std::invalid_argument("drude_lorentz: resonance frequencies must be positive");
    if (gamma_e < 0 || gamma_m < 0)
        throw std::invalid_argument("drude_lorentz: linewidths must be nonnegative");
    MaterialModel m;
    m.kind = Kind::drude_lorentz;
    m.omega_pe = omega_pe;
    m.omega_te = omega_te;
    m.gamma_e = gamma_e;
    m.omega_pm = omega_pm;
    m.omega_tm = omega_tm;
    m.gamma_m = gamma_m;
    return m;
}

static cplx drude_lorentz_response(double omega_p, double omega_t, double gamma, double omega)
{
    if (gamma == 0.0 && omega == omega_t)
        throw std::domain_error("drude_lorentz: pole at undamped resonance omega = omega_T");
    const double coupling = omega_p * omega_p - omega_t * omega_t;
    const cplx den(omega_t * omega_t - omega * omega, -omega * gamma);
    return 1.0 + coupling / den;
}

cplx permittivity(const MaterialModel& m, double omega)
{
    if (omega <= 0)
        throw std::domain_error("permittivity: omega must be positive");
    if (m.kind == MaterialModel::Kind::fixed)
        return m.eps;
    return drude_lorentz_response(m.omega_pe, m.omega_te, m.gamma_e, omega);
}

cplx permeability(const MaterialModel& m, double omega)
{
    if (omega <= 0)
        throw std::domain_error("permeability: omega must be positive");
    if (m.kind == MaterialModel::Kind::fixed)
        return m.mu;
    return drude_lorentz_response(m.omega_pm, m.omega_tm, m.gamma_m, omega);
}

cplx eta(const MaterialModel& m, double omega)
{
    return permittivity(m, omega) * permeability(m, omega);
}

StackReport validate_stack(const LayerStack& s, double omega)
{
    StackReport rep;
    rep.eta1 = eta(s.layer1, omega);
    rep.eta2 = eta(s.layer2, omega);
    rep.eta3 = eta(s.layer3, omega);

    if (!(s.d3_prime > 0)) {
        rep.geometry_ok = false;
        rep.violations.push_back("d3_prime must be positive");
    }
    if (!(s.z0_prime > 0 && s.z0_prime < s.d3_prime)) {
        rep.geometry_ok = false;
        rep.violations.push_back("z0_prime must satisfy 0 < z0_prime < d3_prime");
    }

    auto cladding_real = [&](const MaterialModel& m, const char* name) {
        if (m.kind == MaterialModel::Kind::fixed &&
            (m.eps.imag() != 0.0 || m.mu.imag() != 0.0))
            rep.violations.push_back(std::string(name) + ": fixed claddings must have real eps and mu");
    };
    cladding_real(s.layer1, "layer1");
    cladding_real(s.layer2, "layer2");

    if (!(rep.eta3.real() > rep.eta1.real()))
        rep.violations.push_back("ordering violated: Re(eta3) > Re(eta1) fails");
    if (!(rep.eta1.real() >= rep.eta2.real()))
        rep.violations.push_back("ordering violated: Re(eta1) >= Re(eta2) fails");

    rep.ok = rep.violations.empty() && rep.geometry_ok;
    return rep;
}

bool middle_layer_lossless(const LayerStack& s)
{
    const MaterialModel& m = s.layer3;
    if (m.kind == MaterialModel::Kind::fixed)
        return m.eps.imag() == 0.0 && m.mu.imag() == 0.0;
    return m.gamma_e == 0.0 && m.gamma_m == 0.0;
}

double middle_layer_absorption(const LayerStack& s, double omega)
{
    const MaterialModel& m = s.layer3;
    if (m.kind == MaterialModel::Kind::drude_lorentz)
        return std::max(m.gamma_e, m.gamma_m);
    (void)omega;
    return std::max(m.eps.imag(), m.mu.imag());
}

LayerStack lossless_snapshot(const LayerStack& s, double omega)
{
    LayerStack out = s;
    out.layer3 = MaterialModel::make_fixed(cplx(permittivity(s.layer3, omega).real(), 0.0),
                                           cplx(permeability(s.layer3, omega).real(), 0.0));
    return out;
}

} // namespace nriwg
