#pragma once

#include "nriwg/em_core.hpp"

#include <vector>

namespace nriwg {

enum class ModeClass { guided, surface_near, surface_far };

enum class DipoleComponent { x, z };

// One real root of D_q3 = 0 on the lossless (real-part) kernel. residue_x and
// residue_z are the root's contributions to the decay rate in gamma0 units,
// including the dipole projection weight, so that summing them over all roots
// of both polarizations gives the class rate entering Gamma_n.
struct ModeRoot {
    Polarization pol = Polarization::p;
    ModeClass cls = ModeClass::guided;
    int m = 0;           // ordinal index, 1-based in ascending k
    double k = 0;        // in omega/c units
    cplx dD_dk;          // analytic derivative of D_q3 at the root
    double residue_x = 0;
    double residue_z = 0;
};

// Root searches run on the real-part snapshot of the middle layer; they are
// meaningful for lossless media or absorption small enough that roots shift
// negligibly (the quadrature path covers strongly absorbing cases).

/// Real roots of D_q3 in the guided interval sqrt(Re eta1) < k < sqrt(Re eta3),
/// sorted ascending, |D| < 1e-10 at each root. Deterministic.
std::vector<ModeRoot> find_guided_roots(const LayerStack& s, double omega, Polarization q);

/// Real roots with k^2 > Re(eta3), searched up to max(10 sqrt(Re eta3), 40/d3').
/// Classified surface_near / surface_far at k^2 = 4 Re(eta3).
std::vector<ModeRoot> find_surface_roots(const LayerStack& s, double omega, Polarization q);

/// Cutoff thickness for near-light-line surface modes,
/// d3max = sum_i eps_i / (|eps3| sqrt(Re eta3 - Re eta_i)); the familiar
/// -2 eps1/(eps3 sqrt(eta3 - eta1)) for symmetric claddings.
/// Requires Re(eps3) < 0 and Re(eta3) > Re(eta_i).
double surface_cutoff_thickness(const LayerStack& s, double omega);

/// p-polarized guided-mode rate of the z dipole component, in gamma0 units:
/// (3 pi / 4|eps3|) sum_m k^2 {1 + cos[2(B3 z0' + phi31)]} / |d3' + GH terms|
/// evaluated at each p root. Throws if a root sits at mode birth (beta1 -> 0).
double guided_rate_pz(const LayerStack& s, double omega,
                      const std::vector<ModeRoot>& roots,
                      PhaseFold fold = PhaseFold::mod_pi);

/// Surface-mode counterpart with hyperbolic mode functions:
/// (3 pi / 4|eps3|) sum_m k^2 {cosh[2(B3~ z0' - phi31)] - 1} / |d3' - GH terms|.
double surface_rate_pz(const LayerStack& s, double omega,
                       const std::vector<ModeRoot>& roots);

/// Near-light-line approximation, surface_near roots only:
/// (3 pi |mu3| / 8) sum_m [k^2 - Re eta3] (d3' - 2 z0')^2 / |d3' - d3max|.
/// Requires d3' < d3max.
double surface_rate_pz_near(const LayerStack& s, double omega,
                            const std::vector<ModeRoot>& roots);

/// Pole contribution of one root to the decay rate (gamma0 units, dipole
/// weight included): (3 pi / 8) |numerator of the spectral integrand| / |dD/dk|.
/// s-polarized roots contribute only to the x component.
/// Throws if |dD/dk| < 1e-12 (tangent root needs refinement).
double residue_rate(const LayerStack& s, double omega, const ModeRoot& root,
                    DipoleComponent comp);

} // namespace nriwg
