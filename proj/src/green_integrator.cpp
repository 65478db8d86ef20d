#include "nriwg/green_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nriwg {

namespace {

constexpr double k2_offset = 1e-9;

double sqrt_clamped(double x) { return std::sqrt(std::max(x, 0.0)); }

// Spectral integrands: w_c(k) = Im[ i (mu3/eta3) (k/beta3) * numer_c ], where
// numer_z = 2k^2 I+^p / Dp, numer_xp = beta3^2 I-^p / Dp, numer_xs = eta3 I+^s / Ds.
// With subtract_bulk the r-independent background is removed (I/D -> I/D - 1).
struct Density {
    double z_p, x_p, x_s;
};

Density raw_density(const LayerStack& s, double omega, double k, bool subtract_bulk)
{
    const TransverseContext c = make_context(s, omega, k);
    const cplx pref = cplx(0.0, 1.0) * (c.mu3 / c.eta3) * (k / c.beta3);

    const cplx dp = d_factor(Polarization::p, c);
    const cplx ds = d_factor(Polarization::s, c);
    const auto [ip_plus, ip_minus] = i_factors(Polarization::p, c);
    const auto is_plus = i_factors(Polarization::s, c).first;

    const cplx one = subtract_bulk ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    const cplx fz = ip_plus / dp - one;
    const cplx fxp = ip_minus / dp - one;
    const cplx fxs = is_plus / ds - one;

    Density d;
    d.z_p = (pref * 2.0 * k * k * fz).imag();
    d.x_p = (pref * c.beta3 * c.beta3 * fxp).imag();
    d.x_s = (pref * c.eta3 * fxs).imag();
    return d;
}

LayerStack vacuum_stack()
{
    LayerStack s;
    s.layer1 = MaterialModel::vacuum();
    s.layer2 = MaterialModel::vacuum();
    s.layer3 = MaterialModel::vacuum();
    s.d3_prime = 1.0;
    s.z0_prime = 0.5;
    return s;
}

double evanescent_kmax(const LayerStack& s, double omega)
{
    const double eta3 = eta(s.layer3, omega).real();
    const double zmin = std::min(s.z0_prime, s.d3_prime - s.z0_prime);
    return std::max({10.0 * sqrt_clamped(eta3), 40.0 / s.d3_prime,
                     40.0 / std::max(zmin, 1e-6)});
}

// Breakpoint ladder around a resonance: the estimated Lorentzian half-width,
// then geometric expansion to cover every scale up to the interval size.
void add_root_ladder(std::vector<double>& pts, double k0, double width,
                     double lo, double hi)
{
    pts.push_back(k0);
    double w = std::clamp(width, 1e-11, 0.05 * (hi - lo));
    for (double f = w / 5.0; f < (hi - lo); f *= 5.0) {
        if (k0 - f > lo)
            pts.push_back(k0 - f);
        if (k0 + f < hi)
            pts.push_back(k0 + f);
    }
}

} // namespace

RegionSplit region_split(const LayerStack& s, double omega)
{
    RegionSplit r;
    const double e1 = eta(s.layer1, omega).real();
    const double e2 = eta(s.layer2, omega).real();
    const double e3 = eta(s.layer3, omega).real();
    r.radiation_lo = 0.0;
    r.radiation_hi = sqrt_clamped(e2 - k2_offset);
    r.has_substrate = e1 > e2 + 2.0 * k2_offset;
    if (r.has_substrate) {
        r.substrate_lo = sqrt_clamped(e2 + k2_offset);
        r.substrate_hi = sqrt_clamped(e1 - k2_offset);
    }
    r.has_guided = e3 > e1 + 2.0 * k2_offset;
    if (r.has_guided) {
        r.guided_lo = sqrt_clamped(e1 + k2_offset);
        r.guided_hi = sqrt_clamped(e3 - k2_offset);
    }
    r.evanescent_lo = sqrt_clamped(e3 + k2_offset);
    r.evanescent_hi = evanescent_kmax(s, omega);
    return r;
}

GreenIntegrator::GreenIntegrator(IntegratorOptions opts) : opts_(opts)
{
    // Vacuum anchors: per-component free-space integrals computed with the
    // same quadrature and domain truncation, so all reported rates are in
    // units of the free-space rate and the truncation bias cancels per
    // component.
    const LayerStack vac = vacuum_stack();
    QuadOptions qo{opts_.rel_tol * 1e-2, opts_.abs_tol, opts_.max_depth, 200000};
    const double hi = sqrt_clamped(1.0 - k2_offset);
    const std::vector<double> pts{0.0, 0.5 * hi, hi};
    anchor_z_ = integrate_adaptive(
                    [&](double k) { return raw_density(vac, 1.0, k, false).z_p; }, pts, qo)
                    .value;
    anchor_x_ = integrate_adaptive(
                    [&](double k) {
                        const Density d = raw_density(vac, 1.0, k, false);
                        return d.x_p + d.x_s;
                    },
                    pts, qo)
                    .value;
    if (!(anchor_z_ > 0) || !(anchor_x_ > 0))
        throw std::runtime_error("GreenIntegrator: vacuum anchor failed");
}

RateDensity GreenIntegrator::rate_density(const LayerStack& s, double omega, double k) const
{
    if (!(k > 0))
        throw std::domain_error("rate_density: k must be positive");
    const double e3 = eta(s.layer3, omega).real();
    const bool evanescent = k * k > e3;
    const Density d = raw_density(s, omega, k, evanescent);
    RateDensity out;
    out.k = k;
    out.dgamma_z_p = d.z_p / anchor_z_;
    out.dgamma_x_p = d.x_p / anchor_x_;
    out.dgamma_x_s = d.x_s / anchor_x_;
    return out;
}

ClassRates GreenIntegrator::quadrature_class(const LayerStack& s, double omega,
                                             ModeRegion region) const
{
    const RegionSplit split = region_split(s, omega);
    double lo = 0, hi = 0;
    bool subtract = false;
    switch (region) {
    case ModeRegion::radiation:
        lo = split.radiation_lo;
        hi = split.radiation_hi;
        break;
    case ModeRegion::substrate:
        if (!split.has_substrate)
            return {};
        lo = split.substrate_lo;
        hi = split.substrate_hi;
        break;
    case ModeRegion::guided:
        if (!split.has_guided)
            return {};
        lo = split.guided_lo;
        hi = split.guided_hi;
        break;
    case ModeRegion::evanescent:
        lo = split.evanescent_lo;
        hi = split.evanescent_hi;
        subtract = true;
        break;
    }
    if (!(hi > lo))
        return {};

    std::vector<double> pts{lo, hi};
    if (region == ModeRegion::guided || region == ModeRegion::evanescent) {
        for (Polarization q : {Polarization::p, Polarization::s}) {
            auto roots = (region == ModeRegion::guided)
                             ? find_guided_roots(s, omega, q)
                             : find_surface_roots(s, omega, q);
            for (const ModeRoot& r : roots) {
                // Loss-induced width: |D_lossy| at the lossless root over |dD/dk|.
                const double dloss =
                    std::abs(d_factor(q, make_context(s, omega, r.k)));
                const double w = dloss / std::max(std::abs(r.dD_dk), 1e-12);
                if (r.k > lo && r.k < hi)
                    add_root_ladder(pts, r.k, w, lo, hi);
            }
        }
    }

    QuadOptions qo{opts_.rel_tol, opts_.abs_tol, opts_.max_depth, 200000};
    ClassRates out;
    double err = 0;
    bool conv = true;
    auto run = [&](auto pick) {
        auto f = [&](double k) { return pick(raw_density(s, omega, k, subtract)); };
        QuadResult q = integrate_adaptive(f, pts, qo);
        err = std::max(err, q.error);
        conv = conv && q.converged;
        return q.value;
    };
    out.z_p = run([](const Density& d) { return d.z_p; }) / anchor_z_;
    out.x_p = run([](const Density& d) { return d.x_p; }) / anchor_x_;
    out.x_s = run([](const Density& d) { return d.x_s; }) / anchor_x_;

    if (region == ModeRegion::evanescent) {
        // Exponential tail beyond kmax.
        const Density tail = raw_density(s, omega, hi, true);
        const double zmin = std::min(s.z0_prime, s.d3_prime - s.z0_prime);
        const double tail_bound =
            (std::abs(tail.z_p) + std::abs(tail.x_p) + std::abs(tail.x_s)) /
            std::max(2.0 * zmin, 1e-6);
        err += tail_bound;

        // With strong absorption the subtracted scattering background can
        // undershoot zero by O(|Im eta3|): interference reduces the bulk
        // quenching that this class does not count. Only the nonnegative
        // mode-coupling part is reported; the clamped deficit goes into the
        // error estimate.
        for (double* v : {&out.z_p, &out.x_p, &out.x_s}) {
            if (*v < 0) {
                err += -*v * std::min(anchor_z_, anchor_x_);
                *v = 0;
            }
        }
    }

    out.error = err / std::min(anchor_z_, anchor_x_);
    out.converged = conv;
    out.method = "quadrature";
    return out;
}

ClassRates GreenIntegrator::residue_class(const LayerStack& s, double omega,
                                          ModeRegion region) const
{
    ClassRates out;
    out.method = "residue";
    // residue_rate carries the 1/2 dipole weight; class entries here are in
    // per-component vacuum units, hence the factor 2.
    for (Polarization q : {Polarization::p, Polarization::s}) {
        auto roots = (region == ModeRegion::guided) ? find_guided_roots(s, omega, q)
                                                    : find_surface_roots(s, omega, q);
        for (const ModeRoot& r : roots) {
            if (q == Polarization::p) {
                out.z_p += 2.0 * r.residue_z;
                out.x_p += 2.0 * r.residue_x;
            } else {
                out.x_s += 2.0 * r.residue_x;
            }
        }
    }
    return out;
}

ClassRates GreenIntegrator::integrate_class(const LayerStack& s, double omega,
                                            ModeRegion region) const
{
    if (region == ModeRegion::radiation || region == ModeRegion::substrate)
        return quadrature_class(s, omega, region);
    const bool use_residues =
        middle_layer_lossless(s) ||
        middle_layer_absorption(s, omega) < opts_.residue_switch_gamma;
    return use_residues ? residue_class(s, omega, region)
                        : quadrature_class(s, omega, region);
}

RawBreakdown GreenIntegrator::total_breakdown(const LayerStack& s, double omega) const
{
    const StackReport rep = validate_stack(s, omega);
    if (!rep.geometry_ok)
        throw std::invalid_argument("total_breakdown: invalid stack geometry: " +
                                    (rep.violations.empty() ? std::string()
                                                            : rep.violations.front()));
    // The mode classification presumes the eta ordering; a dispersive middle
    // layer outside it is a hard error, fixed-media stacks (vacuum anchor,
    // homogeneous cross-checks) are allowed through.
    if (!rep.ok && s.layer3.kind == MaterialModel::Kind::drude_lorentz)
        throw std::invalid_argument("total_breakdown: stack ordering violated: " +
                                    rep.violations.front());

    RawBreakdown b;
    b.anchor_z = anchor_z_;
    b.anchor_x = anchor_x_;
    b.radiation = integrate_class(s, omega, ModeRegion::radiation);
    b.substrate = integrate_class(s, omega, ModeRegion::substrate);
    b.guided = integrate_class(s, omega, ModeRegion::guided);
    b.evanescent = integrate_class(s, omega, ModeRegion::evanescent);

    if (opts_.compare_methods && !middle_layer_lossless(s)) {
        auto compare = [&](ModeRegion region, const ClassRates& used) {
            MethodComparison cmp;
            cmp.computed = true;
            const ClassRates quad = (used.method == "quadrature")
                                        ? used
                                        : quadrature_class(s, omega, region);
            const ClassRates res = (used.method == "residue")
                                       ? used
                                       : residue_class(s, omega, region);
            cmp.quadrature_total = quad.total();
            cmp.residue_total = res.total();
            const double scale = std::max(std::abs(cmp.quadrature_total),
                                          std::abs(cmp.residue_total));
            cmp.rel_diff = scale > 0
                               ? std::abs(cmp.quadrature_total - cmp.residue_total) / scale
                               : 0.0;
            return cmp;
        };
        b.guided_cmp = compare(ModeRegion::guided, b.guided);
        b.evanescent_cmp = compare(ModeRegion::evanescent, b.evanescent);
    }
    return b;
}

} // namespace nriwg
