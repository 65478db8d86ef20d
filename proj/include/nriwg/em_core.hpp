#pragma once

#include "nriwg/materials.hpp"

#include <utility>

namespace nriwg {

enum class Polarization { p, s }; // p = TM, s = TE

enum class PhaseFold { mod_pi, mod_half_pi };

// All transverse quantities at one (omega, k), with k in omega/c units.
// beta_j are the signed z-wavenumbers after branch selection: positive-index
// propagating layers take the principal root, left-handed layers its negative,
// and evanescent layers i*sqrt(k^2 - eta_j) regardless of handedness.
struct TransverseContext {
    double omega = 0;
    double k = 0;
    double d3_prime = 0;
    double z0_prime = 0;
    cplx eps1, eps2, eps3;
    cplx mu1, mu2, mu3;
    cplx eta1, eta2, eta3;
    cplx beta1, beta2, beta3;
};

/// z-wavenumber of one layer (index 1..3) with the branch rules above.
/// Claddings (layers 1, 2) additionally enforce Im(beta) >= 0.
cplx layer_beta(const LayerStack& s, int layer_index, double omega, double k);

TransverseContext make_context(const LayerStack& s, double omega, double k);

/// Interface reflection coefficient r^q_ij for incidence from layer i onto
/// layer j. p: (eps_j b_i - eps_i b_j)/(eps_j b_i + eps_i b_j); s mirrors in mu.
/// Throws on a vanishing denominator (surface-polariton pole on the path).
cplx fresnel(Polarization q, int i, int j, const TransverseContext& c);

/// Waveguide denominator D_q3 = 1 - r31 r32 exp(2 i beta3 d3').
cplx d_factor(Polarization q, const TransverseContext& c);

/// Analytic dD_q3/dk at the context's k.
cplx d_factor_derivative(Polarization q, const TransverseContext& c);

/// Source factors I+- = (1 +- r31 e^{2 i b3 z0'})(1 +- r32 e^{2 i b3 (d3'-z0')}).
std::pair<cplx, cplx> i_factors(Polarization q, const TransverseContext& c);

/// Reflection phase of an unimodular r_3j in the guided region, with
/// r = exp(-2 i phi). fold = mod_pi keeps the cosine identities exact (value
/// in [0, pi)); mod_half_pi additionally folds into [0, pi/2]. At NRI-guide
/// parameters both agree and land in [0, pi/2].
/// Throws if | |r| - 1 | > 1e-6 (outside the guided region).
double guided_phase(Polarization q, const TransverseContext& c, int j = 2,
                    PhaseFold fold = PhaseFold::mod_pi);

/// Surface-region phase of a real r_3j <= -1, with r = -exp(2 phi), phi >= 0.
/// Throws if r is not real and <= -1 within tolerance.
double surface_phase(Polarization q, const TransverseContext& c, int j = 2);

/// chi_i = (eta3 - eta_i) / (eps_i^2 beta3^2 + eps3^2 beta_i^2), evaluated with
/// the true squared wavenumbers beta_j^2 = eta_j - k^2. Throws when the
/// denominator is resonantly small.
cplx chi(int i, const TransverseContext& c);

/// Goos-Haenchen denominator term of the guided-mode rate: for polarization p
/// this is (eps_i eps3 / b_i) * (eta3 - eta_i) / (eps_i^2 B3^2 + eps3^2 b_i^2)
/// with B3 = sqrt(eta3 - k^2) and b_i = sqrt(k^2 - eta_i) real magnitudes;
/// negative in an NRI guide. Equals -(B3/k) d(phi_3i)/dk. s mirrors in mu.
double gh_term_guided(Polarization q, int i, const TransverseContext& c);

/// Surface-region counterpart: (B3~/k) d(phi^s_3i)/dk in closed form, with
/// B3~ = sqrt(k^2 - eta3); enters the surface-mode denominator with a minus
/// sign. Positive under the stack ordering.
double gh_term_surface(Polarization q, int i, const TransverseContext& c);

} // namespace nriwg
