#include "nriwg/em_core.hpp"

#include <cmath>
#include <stdexcept>

namespace nriwg {

namespace {

// Clears negative-zero imaginary parts so principal square roots stay on the
// upper side of the branch cut for nominally real arguments.
inline cplx clean_im(cplx z)
{
    if (z.imag() == 0.0)
        return cplx(z.real(), 0.0);
    return z;
}

inline cplx branch_beta(cplx eps, cplx mu, cplx eta_j, double k, bool cladding)
{
    const double k2 = k * k;
    cplx b;
    if (k2 < eta_j.real()) {
        const cplx s = std::sqrt(clean_im(eta_j - k2));
        const bool left_handed = eps.real() < 0.0 && mu.real() < 0.0;
        b = left_handed ? -s : s;
    } else {
        b = cplx(0.0, 1.0) * std::sqrt(clean_im(cplx(k2, 0.0) - eta_j));
    }
    if (cladding && b.imag() < 0.0)
        b = -b;
    return b;
}

struct LayerCoeffs {
    cplx e3, ej, b3, bj; // coupling constants (eps for p, mu for s) and betas
};

LayerCoeffs coeffs(Polarization q, int j, const TransverseContext& c)
{
    LayerCoeffs lc;
    lc.b3 = c.beta3;
    lc.e3 = (q == Polarization::p) ? c.eps3 : c.mu3;
    if (j == 1) {
        lc.bj = c.beta1;
        lc.ej = (q == Polarization::p) ? c.eps1 : c.mu1;
    } else if (j == 2) {
        lc.bj = c.beta2;
        lc.ej = (q == Polarization::p) ? c.eps2 : c.mu2;
    } else {
        throw std::invalid_argument("interface index must be 1 or 2");
    }
    return lc;
}

cplx coupling(Polarization q, int idx, const TransverseContext& c)
{
    if (q == Polarization::p)
        return idx == 1 ? c.eps1 : idx == 2 ? c.eps2 : c.eps3;
    return idx == 1 ? c.mu1 : idx == 2 ? c.mu2 : c.mu3;
}

cplx beta_of(int idx, const TransverseContext& c)
{
    return idx == 1 ? c.beta1 : idx == 2 ? c.beta2 : c.beta3;
}

} // namespace

cplx layer_beta(const LayerStack& s, int layer_index, double omega, double k)
{
    const MaterialModel* m = nullptr;
    switch (layer_index) {
    case 1: m = &s.layer1; break;
    case 2: m = &s.layer2; break;
    case 3: m = &s.layer3; break;
    default: throw std::invalid_argument("layer index must be 1, 2 or 3");
    }
    const cplx e = permittivity(*m, omega);
    const cplx u = permeability(*m, omega);
    return branch_beta(e, u, e * u, k, layer_index != 3);
}

TransverseContext make_context(const LayerStack& s, double omega, double k)
{
    TransverseContext c;
    c.omega = omega;
    c.k = k;
    c.d3_prime = s.d3_prime;
    c.z0_prime = s.z0_prime;
    c.eps1 = permittivity(s.layer1, omega);
    c.eps2 = permittivity(s.layer2, omega);
    c.eps3 = permittivity(s.layer3, omega);
    c.mu1 = permeability(s.layer1, omega);
    c.mu2 = permeability(s.layer2, omega);
    c.mu3 = permeability(s.layer3, omega);
    c.eta1 = c.eps1 * c.mu1;
    c.eta2 = c.eps2 * c.mu2;
    c.eta3 = c.eps3 * c.mu3;
    c.beta1 = branch_beta(c.eps1, c.mu1, c.eta1, k, true);
    c.beta2 = branch_beta(c.eps2, c.mu2, c.eta2, k, true);
    c.beta3 = branch_beta(c.eps3, c.mu3, c.eta3, k, false);
    return c;
}

cplx fresnel(Polarization q, int i, int j, const TransverseContext& c)
{
    const cplx ei = coupling(q, i, c), ej = coupling(q, j, c);
    const cplx bi = beta_of(i, c), bj = beta_of(j, c);
    const cplx num = ej * bi - ei * bj;
    const cplx den = ej * bi + ei * bj;
    const double scale = std::abs(ej * bi) + std::abs(ei * bj);
    if (std::abs(den) < 1e-14 * std::max(scale, 1e-300))
        throw std::domain_error("fresnel: interface pole (vanishing denominator)");
    return num / den;
}

cplx d_factor(Polarization q, const TransverseContext& c)
{
    const cplx r31 = fresnel(q, 3, 1, c);
    const cplx r32 = fresnel(q, 3, 2, c);
    return 1.0 - r31 * r32 * std::exp(cplx(0.0, 2.0) * c.beta3 * c.d3_prime);
}

namespace {

// d r_3j / dk with beta' = -k/beta.
cplx fresnel_derivative(Polarization q, int j, const TransverseContext& c)
{
    const LayerCoeffs lc = coeffs(q, j, c);
    const cplx b3p = -c.k / lc.b3;
    const cplx bjp = -c.k / lc.bj;
    const cplx num = lc.ej * lc.b3 - lc.e3 * lc.bj;
    const cplx den = lc.ej * lc.b3 + lc.e3 * lc.bj;
    const cplx nump = lc.ej * b3p - lc.e3 * bjp;
    const cplx denp = lc.ej * b3p + lc.e3 * bjp;
    return (nump * den - num * denp) / (den * den);
}

} // namespace

cplx d_factor_derivative(Polarization q, const TransverseContext& c)
{
    const cplx r31 = fresnel(q, 3, 1, c);
    const cplx r32 = fresnel(q, 3, 2, c);
    const cplx r31p = fresnel_derivative(q, 1, c);
    const cplx r32p = fresnel_derivative(q, 2, c);
    const cplx b3p = -c.k / c.beta3;
    const cplx phase = std::exp(cplx(0.0, 2.0) * c.beta3 * c.d3_prime);
    return -(r31p * r32 + r31 * r32p +
             r31 * r32 * cplx(0.0, 2.0) * c.d3_prime * b3p) * phase;
}

std::pair<cplx, cplx> i_factors(Polarization q, const TransverseContext& c)
{
    const cplx r31 = fresnel(q, 3, 1, c);
    const cplx r32 = fresnel(q, 3, 2, c);
    const cplx u = r31 * std::exp(cplx(0.0, 2.0) * c.beta3 * c.z0_prime);
    const cplx v = r32 * std::exp(cplx(0.0, 2.0) * c.beta3 * (c.d3_prime - c.z0_prime));
    return {(1.0 + u) * (1.0 + v), (1.0 - u) * (1.0 - v)};
}

double guided_phase(Polarization q, const TransverseContext& c, int j, PhaseFold fold)
{
    const cplx r = fresnel(q, 3, j, c);
    if (std::abs(std::abs(r) - 1.0) > 1e-6)
        throw std::domain_error("guided_phase: reflection coefficient not unimodular");
    double phi = -std::arg(r) / 2.0; // in (-pi/2, pi/2]
    if (fold == PhaseFold::mod_pi) {
        if (phi < 0.0)
            phi += M_PI;
    } else {
        phi = std::fmod(phi + M_PI, M_PI / 2.0);
        if (phi < 0.0)
            phi += M_PI / 2.0;
    }
    return phi;
}

double surface_phase(Polarization q, const TransverseContext& c, int j)
{
    const cplx r = fresnel(q, 3, j, c);
    if (std::abs(r.imag()) > 1e-9 * std::max(1.0, std::abs(r)))
        throw std::domain_error("surface_phase: reflection coefficient not real");
    if (r.real() > -1.0 + 1e-12)
        throw std::domain_error("surface_phase: expected r <= -1 in the surface region");
    return std::log(-r.real()) / 2.0;
}

cplx chi(int i, const TransverseContext& c)
{
    const cplx ei = i == 1 ? c.eps1 : c.eps2;
    const cplx etai = i == 1 ? c.eta1 : c.eta2;
    const cplx b3sq = c.eta3 - c.k * c.k;
    const cplx bisq = etai - c.k * c.k;
    const cplx den = ei * ei * b3sq + c.eps3 * c.eps3 * bisq;
    const double scale = std::abs(ei * ei * b3sq) + std::abs(c.eps3 * c.eps3 * bisq);
    if (std::abs(den) < 1e-10 * std::max(scale, 1e-300))
        throw std::domain_error("chi: resonant denominator (interface-pole vicinity)");
    return (c.eta3 - etai) / den;
}

double gh_term_guided(Polarization q, int i, const TransverseContext& c)
{
    const cplx ci = coupling(q, i, c);
    const cplx c3 = coupling(q, 3, c);
    const double k2 = c.k * c.k;
    const double B3sq = c.eta3.real() - k2;  // > 0 in the guided region
    const double bisq = k2 - (i == 1 ? c.eta1 : c.eta2).real(); // > 0
    if (B3sq <= 0 || bisq < 0)
        throw std::domain_error("gh_term_guided: k outside the guided region");
    if (bisq < 1e-12)
        throw std::domain_error("gh_term_guided: mode-birth singularity (beta_i -> 0)");
    const double bi = std::sqrt(bisq);
    const double num = (ci.real() * c3.real()) *
                       (c.eta3.real() - (i == 1 ? c.eta1 : c.eta2).real());
    const double den = bi * (ci.real() * ci.real() * B3sq +
                             c3.real() * c3.real() * bisq);
    if (bi == 0.0 || den == 0.0)
        throw std::domain_error("gh_term_guided: mode-birth singularity (beta_i -> 0)");
    return num / den;
}

double gh_term_surface(Polarization q, int i, const TransverseContext& c)
{
    const cplx ci = coupling(q, i, c);
    const cplx c3 = coupling(q, 3, c);
    const double k2 = c.k * c.k;
    const double B3sq = k2 - c.eta3.real();  // > 0 in the surface region
    const double bisq = k2 - (i == 1 ? c.eta1 : c.eta2).real();
    if (B3sq < 0 || bisq <= 0)
        throw std::domain_error("gh_term_surface: k outside the surface region");
    const double bi = std::sqrt(bisq);
    const double num = -(ci.real() * c3.real()) *
                       (c.eta3.real() - (i == 1 ? c.eta1 : c.eta2).real());
    const double den = bi * (c3.real() * c3.real() * bisq -
                             ci.real() * ci.real() * B3sq);
    if (den == 0.0)
        throw std::domain_error("gh_term_surface: interface pole");
    return num / den;
}

} // namespace nriwg
