#pragma once

#include "nriwg/mode_solver.hpp"
#include "nriwg/quadrature.hpp"

#include <string>

namespace nriwg {

enum class ModeRegion { radiation, substrate, guided, evanescent };

// Differential rate per unit k, normalized so each component integrates to 1
// for the all-vacuum stack. The z component couples only to p modes.
struct RateDensity {
    double k = 0;
    double dgamma_x_p = 0;
    double dgamma_x_s = 0;
    double dgamma_z_p = 0;
};

// The four class intervals in k (omega/c units), offset by 1e-9 in k^2 from
// the Re(eta_j) boundaries. The substrate interval is empty when
// Re(eta1) = Re(eta2).
struct RegionSplit {
    double radiation_lo = 0, radiation_hi = 0;
    double substrate_lo = 0, substrate_hi = 0;
    double guided_lo = 0, guided_hi = 0;
    double evanescent_lo = 0, evanescent_hi = 0;
    bool has_substrate = false;
    bool has_guided = false;
};

RegionSplit region_split(const LayerStack& s, double omega);

// Per-component rates of one mode class in vacuum units (all-vacuum radiation
// class = 1.0 per component); the dipole projection weights are applied later
// when assembling Gamma_n.
struct ClassRates {
    double x_p = 0, x_s = 0, z_p = 0;
    double error = 0;
    bool converged = true;
    std::string method = "quadrature";

    double total() const { return x_p + x_s + z_p; }
};

struct MethodComparison {
    bool computed = false;
    double quadrature_total = 0;
    double residue_total = 0;
    double rel_diff = 0;
};

struct RawBreakdown {
    ClassRates radiation, substrate, guided, evanescent;
    double anchor_z = 0, anchor_x = 0;
    MethodComparison guided_cmp, evanescent_cmp;
};

struct IntegratorOptions {
    double rel_tol = 1e-6;
    double abs_tol = 1e-12;
    int max_depth = 60;
    // Below this absorption scale the guided/evanescent classes switch from
    // quadrature to lossless residue sums.
    double residue_switch_gamma = 1e-8;
    bool compare_methods = false;
};

// Numerical integration of the spectral decay-rate density over the real-k
// line. Everything is reported relative to the free-space rate: the vacuum
// anchor (the same quadrature run on the all-vacuum stack) fixes the scale,
// so no physical constants enter. In the evanescent class the homogeneous
// background is subtracted (I/D -> I/D - 1); with absorption the unsubtracted
// bulk term grows as k^2 and describes quenching into the absorber, not decay
// into modes of the structure.
class GreenIntegrator {
public:
    explicit GreenIntegrator(IntegratorOptions opts = {});

    double anchor_z() const { return anchor_z_; }
    double anchor_x() const { return anchor_x_; }
    const IntegratorOptions& options() const { return opts_; }

    RateDensity rate_density(const LayerStack& s, double omega, double k) const;
    ClassRates integrate_class(const LayerStack& s, double omega, ModeRegion region) const;
    RawBreakdown total_breakdown(const LayerStack& s, double omega) const;

private:
    ClassRates quadrature_class(const LayerStack& s, double omega, ModeRegion region) const;
    ClassRates residue_class(const LayerStack& s, double omega, ModeRegion region) const;

    IntegratorOptions opts_;
    double anchor_z_ = 0; // vacuum z-component integral, ~4/3
    double anchor_x_ = 0; // vacuum x-component integral (p + s), ~4/3
};

} // namespace nriwg
