#include "nriwg/mode_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nriwg {

namespace {

constexpr double k2_offset = 1e-9;   // keeps grids off region boundaries
constexpr int bracket_grid = 2000;
constexpr double root_tol = 1e-12;   // relative bisection tolerance on k

double sqrt_clamped(double x) { return std::sqrt(std::max(x, 0.0)); }

// Unwrapped resonance phase theta(k) = beta3 d3' + (arg r31 + arg r32)/2.
// D_q3 = 0 on a unimodular stretch iff theta is an integer multiple of pi.
double theta_raw(const LayerStack& s, double omega, Polarization q, double k)
{
    const TransverseContext c = make_context(s, omega, k);
    const cplx r31 = fresnel(q, 3, 1, c);
    const cplx r32 = fresnel(q, 3, 2, c);
    return c.beta3.real() * c.d3_prime + 0.5 * (std::arg(r31) + std::arg(r32));
}

double unwrap_near(double raw, double reference)
{
    double v = raw;
    while (v - reference > M_PI)
        v -= 2.0 * M_PI;
    while (reference - v > M_PI)
        v += 2.0 * M_PI;
    return v;
}

double abs_d(const LayerStack& s, double omega, Polarization q, double k)
{
    return std::abs(d_factor(q, make_context(s, omega, k)));
}

// One-sided Newton polish on Re[D/D'], kept inside [lo, hi].
double polish_root(const LayerStack& s, double omega, Polarization q,
                   double k, double lo, double hi)
{
    double best = k;
    double best_abs = abs_d(s, omega, q, k);
    for (int it = 0; it < 3; ++it) {
        const TransverseContext c = make_context(s, omega, best);
        const cplx D = d_factor(q, c);
        const cplx Dp = d_factor_derivative(q, c);
        if (std::abs(Dp) < 1e-300)
            break;
        const double next = best - (D / Dp).real();
        if (!(next > lo && next < hi))
            break;
        const double next_abs = abs_d(s, omega, q, next);
        if (next_abs >= best_abs)
            break;
        best = next;
        best_abs = next_abs;
    }
    return best;
}

double bisect_phase(const LayerStack& s, double omega, Polarization q,
                    double lo, double hi, double th_lo, double th_hi, double level)
{
    double f_lo = th_lo - level;
    double f_hi = th_hi - level;
    double anchor_lo = th_lo, anchor_hi = th_hi;
    while (hi - lo > root_tol * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        const double th_mid = unwrap_near(theta_raw(s, omega, q, mid),
                                          0.5 * (anchor_lo + anchor_hi));
        const double f_mid = th_mid - level;
        if (f_mid == 0.0)
            return mid;
        if ((f_lo < 0) != (f_mid < 0)) {
            hi = mid;
            f_hi = f_mid;
            anchor_hi = th_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
            anchor_lo = th_mid;
        }
    }
    (void)f_hi;
    return 0.5 * (lo + hi);
}

// Real dispersion function in the surface region (all kernel quantities real
// on the lossless snapshot): g = r31 r32 exp(-2 B3~ d3') - 1.
double surface_g(const LayerStack& s, double omega, Polarization q, double k)
{
    const TransverseContext c = make_context(s, omega, k);
    const cplx r31 = fresnel(q, 3, 1, c);
    const cplx r32 = fresnel(q, 3, 2, c);
    const cplx val = r31 * r32 * std::exp(cplx(0.0, 2.0) * c.beta3 * c.d3_prime);
    return val.real() - 1.0;
}

double bisect_surface(const LayerStack& s, double omega, Polarization q,
                      double lo, double hi, double f_lo)
{
    while (hi - lo > root_tol * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = surface_g(s, omega, q, mid);
        if (f_mid == 0.0)
            return mid;
        if ((f_lo < 0) != (f_mid < 0))
            hi = mid;
        else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    return 0.5 * (lo + hi);
}

void fill_residues(const LayerStack& snap, double omega, ModeRoot& r)
{
    r.residue_x = residue_rate(snap, omega, r, DipoleComponent::x);
    r.residue_z = residue_rate(snap, omega, r, DipoleComponent::z);
}

std::vector<double> guided_roots_on_grid(const LayerStack& snap, double omega,
                                         Polarization q, double a, double b, int n)
{
    std::vector<double> roots;
    if (!(b > a) || n < 2)
        return roots;
    std::vector<double> ks(n), th(n);
    for (int i = 0; i < n; ++i)
        ks[i] = a + (b - a) * i / (n - 1);
    th[0] = theta_raw(snap, omega, q, ks[0]);
    for (int i = 1; i < n; ++i)
        th[i] = unwrap_near(theta_raw(snap, omega, q, ks[i]), th[i - 1]);
    for (int i = 0; i + 1 < n; ++i) {
        const double t0 = th[i], t1 = th[i + 1];
        const int m_lo = (int)std::ceil(std::min(t0, t1) / M_PI - 1e-12);
        const int m_hi = (int)std::floor(std::max(t0, t1) / M_PI + 1e-12);
        for (int m = m_lo; m <= m_hi; ++m) {
            const double level = m * M_PI;
            if ((t0 - level) * (t1 - level) > 0.0)
                continue;
            double k = bisect_phase(snap, omega, q, ks[i], ks[i + 1], t0, t1, level);
            k = polish_root(snap, omega, q, k, a, b);
            roots.push_back(k);
        }
    }
    return roots;
}

} // namespace

std::vector<ModeRoot> find_guided_roots(const LayerStack& s, double omega, Polarization q)
{
    const LayerStack snap = lossless_snapshot(s, omega);
    const double eta1 = eta(snap.layer1, omega).real();
    const double eta3 = eta(snap.layer3, omega).real();
    std::vector<ModeRoot> out;
    if (!(eta3 > eta1))
        return out;
    const double a = sqrt_clamped(eta1 + k2_offset);
    const double b = sqrt_clamped(eta3 - k2_offset);
    if (!(b > a))
        return out;

    std::vector<double> ks = guided_roots_on_grid(snap, omega, q, a, b, bracket_grid);

    // Near-tangent |D| minima without a phase crossing: refine locally, two
    // levels of 10x.
    for (int level = 0; level < 2; ++level) {
        std::vector<double> extra;
        const int n = bracket_grid * (level == 0 ? 1 : 10);
        std::vector<double> grid(n);
        for (int i = 0; i < n; ++i)
            grid[i] = a + (b - a) * i / (n - 1);
        for (int i = 1; i + 1 < n; ++i) {
            const double d0 = abs_d(snap, omega, q, grid[i - 1]);
            const double d1 = abs_d(snap, omega, q, grid[i]);
            const double d2 = abs_d(snap, omega, q, grid[i + 1]);
            if (d1 < d0 && d1 < d2 && d1 < 1e-4) {
                bool known = false;
                for (double k : ks)
                    if (std::abs(k - grid[i]) < 2.0 * (b - a) / n)
                        known = true;
                if (!known) {
                    auto local = guided_roots_on_grid(snap, omega, q, grid[i - 1],
                                                      grid[i + 1], 64);
                    extra.insert(extra.end(), local.begin(), local.end());
                }
            }
        }
        if (extra.empty())
            break;
        ks.insert(ks.end(), extra.begin(), extra.end());
    }

    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end(),
                         [&](double x, double y) { return std::abs(x - y) < 1e-9; }),
             ks.end());

    int m = 1;
    for (double k : ks) {
        if (abs_d(snap, omega, q, k) > 1e-10)
            continue;
        ModeRoot r;
        r.pol = q;
        r.cls = ModeClass::guided;
        r.m = m++;
        r.k = k;
        r.dD_dk = d_factor_derivative(q, make_context(snap, omega, k));
        fill_residues(snap, omega, r);
        out.push_back(r);
    }
    return out;
}

std::vector<ModeRoot> find_surface_roots(const LayerStack& s, double omega, Polarization q)
{
    const LayerStack snap = lossless_snapshot(s, omega);
    const double eta3 = eta(snap.layer3, omega).real();
    std::vector<ModeRoot> out;
    if (eta3 <= 0)
        return out;
    const double a = sqrt_clamped(eta3 + k2_offset);
    const double b = std::max(10.0 * std::sqrt(eta3), 40.0 / snap.d3_prime);
    if (!(b > a))
        return out;

    std::vector<double> ks;
    double prev_k = a;
    double prev_g = surface_g(snap, omega, q, prev_k);
    for (int i = 1; i < bracket_grid; ++i) {
        const double k = a + (b - a) * i / (bracket_grid - 1);
        const double g = surface_g(snap, omega, q, k);
        if ((prev_g < 0) != (g < 0))
            ks.push_back(bisect_surface(snap, omega, q, prev_k, k, prev_g));
        prev_k = k;
        prev_g = g;
    }

    int m = 1;
    for (double& k : ks) {
        k = polish_root(snap, omega, q, k, a, b);
        if (abs_d(snap, omega, q, k) > 1e-10)
            continue; // bracketed a pole, not a zero
        ModeRoot r;
        r.pol = q;
        r.cls = (k * k < 4.0 * eta3) ? ModeClass::surface_near : ModeClass::surface_far;
        r.m = m++;
        r.k = k;
        r.dD_dk = d_factor_derivative(q, make_context(snap, omega, k));
        fill_residues(snap, omega, r);
        out.push_back(r);
    }
    return out;
}

double surface_cutoff_thickness(const LayerStack& s, double omega)
{
    const double eps3 = permittivity(s.layer3, omega).real();
    const double eta3 = eta(s.layer3, omega).real();
    const double eta1 = eta(s.layer1, omega).real();
    const double eta2 = eta(s.layer2, omega).real();
    const double eps1 = permittivity(s.layer1, omega).real();
    const double eps2 = permittivity(s.layer2, omega).real();
    if (eps3 >= 0)
        throw std::domain_error("surface_cutoff_thickness: requires Re(eps3) < 0");
    if (!(eta3 > eta1) || !(eta3 > eta2))
        throw std::domain_error("surface_cutoff_thickness: requires Re(eta3) > Re(eta_i)");
    return eps1 / (-eps3 * std::sqrt(eta3 - eta1)) +
           eps2 / (-eps3 * std::sqrt(eta3 - eta2));
}

double guided_rate_pz(const LayerStack& s, double omega,
                      const std::vector<ModeRoot>& roots, PhaseFold fold)
{
    const LayerStack snap = lossless_snapshot(s, omega);
    const double eps3 = std::abs(permittivity(snap.layer3, omega).real());
    const double eta1 = eta(snap.layer1, omega).real();
    const double eta2 = eta(snap.layer2, omega).real();
    const double eta3 = eta(snap.layer3, omega).real();
    double total = 0;
    for (const ModeRoot& r : roots) {
        if (r.pol != Polarization::p || r.cls != ModeClass::guided)
            continue;
        const double k2 = r.k * r.k;
        if (k2 - eta1 < 1e-10 || k2 - eta2 < 1e-10)
            throw std::domain_error("guided_rate_pz: mode-birth singularity at root m=" +
                                    std::to_string(r.m));
        const TransverseContext c = make_context(snap, omega, r.k);
        const double B3 = sqrt_clamped(eta3 - k2);
        const double phi31 = guided_phase(Polarization::p, c, 1, fold);
        const double num = k2 * (1.0 + std::cos(2.0 * (B3 * c.z0_prime + phi31)));
        const double gh1 = gh_term_guided(Polarization::p, 1, c);
        const double gh2 = gh_term_guided(Polarization::p, 2, c);
        if (c.eps3.real() < 0 && (gh1 >= 0 || gh2 >= 0))
            std::fprintf(stderr,
                         "guided_rate_pz: GH terms not negative at k=%g in an NRI guide\n",
                         r.k);
        total += num / std::abs(c.d3_prime + gh1 + gh2);
    }
    return 3.0 * M_PI / (4.0 * eps3) * total;
}

double surface_rate_pz(const LayerStack& s, double omega,
                       const std::vector<ModeRoot>& roots)
{
    const LayerStack snap = lossless_snapshot(s, omega);
    const double eps3 = std::abs(permittivity(snap.layer3, omega).real());
    const double eta3 = eta(snap.layer3, omega).real();
    double total = 0;
    for (const ModeRoot& r : roots) {
        if (r.pol != Polarization::p || r.cls == ModeClass::guided)
            continue;
        const TransverseContext c = make_context(snap, omega, r.k);
        const double B3 = sqrt_clamped(r.k * r.k - eta3);
        const double phi31 = surface_phase(Polarization::p, c, 1);
        const double num = r.k * r.k * (std::cosh(2.0 * (B3 * c.z0_prime - phi31)) - 1.0);
        const double den = std::abs(c.d3_prime -
                                    gh_term_surface(Polarization::p, 1, c) -
                                    gh_term_surface(Polarization::p, 2, c));
        total += num / den;
    }
    return 3.0 * M_PI / (4.0 * eps3) * total;
}

double surface_rate_pz_near(const LayerStack& s, double omega,
                            const std::vector<ModeRoot>& roots)
{
    const LayerStack snap = lossless_snapshot(s, omega);
    const double mu3 = std::abs(permeability(snap.layer3, omega).real());
    const double eta3 = eta(snap.layer3, omega).real();
    const double d3max = surface_cutoff_thickness(snap, omega);
    if (!(snap.d3_prime < d3max * (1.0 - 1e-9)))
        throw std::domain_error("surface_rate_pz_near: requires d3' < d3max (diverges at cutoff)");
    double total = 0;
    for (const ModeRoot& r : roots) {
        if (r.pol != Polarization::p || r.cls != ModeClass::surface_near)
            continue;
        const double num = (r.k * r.k - eta3) *
                           (snap.d3_prime - 2.0 * snap.z0_prime) *
                           (snap.d3_prime - 2.0 * snap.z0_prime);
        total += num / std::abs(snap.d3_prime - d3max);
    }
    return 3.0 * M_PI * mu3 / 8.0 * total;
}

double residue_rate(const LayerStack& s, double omega, const ModeRoot& root,
                    DipoleComponent comp)
{
    if (comp == DipoleComponent::z && root.pol == Polarization::s)
        return 0.0; // zz couples only to p modes
    const LayerStack snap = lossless_snapshot(s, omega);
    const TransverseContext c = make_context(snap, omega, root.k);
    const cplx dD = d_factor_derivative(root.pol, c);
    if (std::abs(dD) < 1e-12)
        throw std::runtime_error("residue_rate: tangent root (|dD/dk| < 1e-12), needs refinement");

    const auto [i_plus, i_minus] = i_factors(root.pol, c);
    cplx numer;
    if (comp == DipoleComponent::z)
        numer = 2.0 * root.k * root.k * i_plus;
    else if (root.pol == Polarization::p)
        numer = c.beta3 * c.beta3 * i_minus;
    else
        numer = c.eta3 * i_plus;
    const cplx M = (c.mu3 / c.eta3) * (root.k / c.beta3) * numer;
    return 3.0 * M_PI / 8.0 * std::abs(M) / std::abs(dD);
}

} // namespace nriwg
