#pragma once

#include <complex>
#include <string>
#include <vector>

namespace nriwg {

using cplx = std::complex<double>;

// Frequencies are dimensionless multiples of a scaling frequency omega0;
// lengths (d3_prime, z0_prime) are multiples of c/omega.

struct MaterialModel {
    enum class Kind { fixed, drude_lorentz };

    Kind kind = Kind::fixed;

    // fixed media
    cplx eps{1.0, 0.0};
    cplx mu{1.0, 0.0};

    // Drude-Lorentz parameters, in omega0 units
    double omega_pe = 0, omega_te = 0, gamma_e = 0;
    double omega_pm = 0, omega_tm = 0, gamma_m = 0;

    static MaterialModel make_fixed(cplx eps, cplx mu);
    static MaterialModel vacuum() { return make_fixed({1, 0}, {1, 0}); }
    static MaterialModel make_drude_lorentz(double omega_pe, double omega_te, double gamma_e,
                                            double omega_pm, double omega_tm, double gamma_m);
};

/// Relative permittivity at frequency omega (omega0 units).
/// Drude-Lorentz form: 1 + (w_pe^2 - w_te^2) / (w_te^2 - w^2 - i w g_e).
/// Throws std::domain_error at the undamped resonance (gamma_e = 0, omega = omega_te).
cplx permittivity(const MaterialModel& m, double omega);

/// Relative permeability; exact magnetic mirror of permittivity.
cplx permeability(const MaterialModel& m, double omega);

/// eta = eps(omega) * mu(omega).
cplx eta(const MaterialModel& m, double omega);

// Three-layer stack: layer1 is the lower semi-infinite cladding, layer2 the
// upper one, layer3 the middle layer of thickness d3_prime holding the dipole
// at height z0_prime above the lower interface.
struct LayerStack {
    MaterialModel layer1, layer2, layer3;
    double d3_prime = 1.0;
    double z0_prime = 0.5;
};

struct StackReport {
    bool ok = true;
    bool geometry_ok = true;
    cplx eta1, eta2, eta3;
    std::vector<std::string> violations;
};

/// Checks 0 < z0' < d3' and the ordering Re(eta3) > Re(eta1) >= Re(eta2),
/// plus realness of fixed claddings. Never throws; callers decide severity.
StackReport validate_stack(const LayerStack& s, double omega);

/// True if the middle layer has no absorption: fixed with real eps/mu, or
/// Drude-Lorentz with gamma_e = gamma_m = 0.
bool middle_layer_lossless(const LayerStack& s);

/// Absorption scale used for the residue-vs-quadrature switch: max(gamma_e,
/// gamma_m) for Drude-Lorentz, max of Im parts for fixed media.
double middle_layer_absorption(const LayerStack& s, double omega);

/// Same stack with layer3 replaced by the fixed real parts of (eps3, mu3) at
/// omega. Root finding and residue evaluation run on this snapshot.
LayerStack lossless_snapshot(const LayerStack& s, double omega);

} // namespace nriwg
