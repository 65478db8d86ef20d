#include <doctest.h>

#include "nriwg/green_integrator.hpp"

#include <cmath>

using namespace nriwg;

namespace {

LayerStack vacuum3()
{
    LayerStack s;
    s.layer1 = s.layer2 = s.layer3 = MaterialModel::vacuum();
    s.d3_prime = 1.0;
    s.z0_prime = 0.5;
    return s;
}

LayerStack homogeneous(double n)
{
    LayerStack s;
    s.layer1 = s.layer2 = s.layer3 = MaterialModel::make_fixed({n, 0.0}, {n, 0.0});
    s.d3_prime = 1.0;
    s.z0_prime = 0.5;
    return s;
}

LayerStack drude_stack(double gamma, double omega_pm = 1.25, double d3 = 1.0,
                       double z0_frac = 0.25)
{
    LayerStack s;
    s.layer1 = s.layer2 = MaterialModel::vacuum();
    s.layer3 = MaterialModel::make_drude_lorentz(1.25, 1.0, gamma, omega_pm, 1.0, gamma);
    s.d3_prime = d3;
    s.z0_prime = z0_frac * d3;
    return s;
}

double weighted_total(const RawBreakdown& b)
{
    return 0.5 * (b.radiation.total() + b.substrate.total() + b.guided.total() +
                  b.evanescent.total());
}

} // namespace

TEST_CASE("vacuum anchors recover the free-space angular integral")
{
    const GreenIntegrator gi;
    CHECK(gi.anchor_z() == doctest::Approx(4.0 / 3.0).epsilon(1e-3));
    CHECK(gi.anchor_x() == doctest::Approx(4.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("all-vacuum stack integrates to one per component, radiation only")
{
    const GreenIntegrator gi;
    const RawBreakdown b = gi.total_breakdown(vacuum3(), 1.0);
    CHECK(b.radiation.z_p == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(b.radiation.x_p + b.radiation.x_s == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(b.substrate.total() == 0.0);
    CHECK(b.guided.total() == 0.0);
    CHECK(b.evanescent.total() == 0.0);
}

TEST_CASE("homogeneous-medium law")
{
    const GreenIntegrator gi;
    for (double n : {1.0, 1.5, 2.0}) {
        const double total = weighted_total(gi.total_breakdown(homogeneous(n), 1.0));
        CHECK_MESSAGE(std::abs(total - n * n) / (n * n) < 1e-3, "n=", n);
    }
}

TEST_CASE("region split follows the eta ordering")
{
    SUBCASE("matched claddings leave no substrate interval")
    {
        const RegionSplit r = region_split(drude_stack(1e-10), 1.09);
        CHECK_FALSE(r.has_substrate);
        CHECK(r.has_guided);
        CHECK(r.radiation_hi == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.guided_lo < r.guided_hi);
        CHECK(r.guided_hi == doctest::Approx(std::sqrt(3.9601)).epsilon(1e-2));
        CHECK(r.evanescent_hi >= 40.0);
    }
    SUBCASE("distinct claddings open one")
    {
        LayerStack s = drude_stack(1e-10);
        s.layer1 = MaterialModel::make_fixed({1.21, 0.0}, {1.0, 0.0});
        const RegionSplit r = region_split(s, 1.09);
        CHECK(r.has_substrate);
        CHECK(r.substrate_lo == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.substrate_hi == doctest::Approx(1.1).epsilon(1e-6));
    }
}

TEST_CASE("rate density")
{
    const GreenIntegrator gi;

    SUBCASE("vacuum density is the free-space angular spectrum")
    {
        const RateDensity d = gi.rate_density(vacuum3(), 1.0, 0.5);
        const double expect_z = 2.0 * 0.125 / std::sqrt(0.75) / (4.0 / 3.0);
        CHECK(d.dgamma_z_p == doctest::Approx(expect_z).epsilon(1e-3));
        CHECK(d.dgamma_x_p + d.dgamma_x_s ==
              doctest::Approx((0.5 * std::sqrt(0.75) + 0.5 / std::sqrt(0.75)) / (4.0 / 3.0))
                  .epsilon(1e-3));
        CHECK(gi.rate_density(vacuum3(), 1.0, 1.5).dgamma_z_p == doctest::Approx(0.0));
    }
    SUBCASE("symmetric stacks are invariant under z0 -> d3 - z0")
    {
        LayerStack a = drude_stack(1e-3, 1.189, 0.8, 0.3);
        LayerStack b = a;
        b.z0_prime = a.d3_prime - a.z0_prime;
        for (double k : {0.4, 1.2, 1.9, 3.0, 8.0}) {
            const RateDensity da = gi.rate_density(a, 1.08, k);
            const RateDensity db = gi.rate_density(b, 1.08, k);
            CHECK(da.dgamma_z_p ==
                  doctest::Approx(db.dgamma_z_p).epsilon(1e-10));
            CHECK(da.dgamma_x_p ==
                  doctest::Approx(db.dgamma_x_p).epsilon(1e-10));
            CHECK(da.dgamma_x_s ==
                  doctest::Approx(db.dgamma_x_s).epsilon(1e-10));
        }
    }
    SUBCASE("absorption broadens mode poles into Lorentzians")
    {
        // moderately absorbing guide: density near the (lossless) root towers
        // over the background a few widths away
        const LayerStack s = drude_stack(1e-6, 1.189, 1.0, 0.3);
        const auto roots = find_guided_roots(s, 1.08, Polarization::p);
        REQUIRE_FALSE(roots.empty());
        const double k0 = roots.back().k;
        const double at_peak = gi.rate_density(s, 1.08, k0).dgamma_x_p;
        const double off_peak = gi.rate_density(s, 1.08, k0 + 0.1).dgamma_x_p;
        CHECK(at_peak > 50.0 * std::abs(off_peak));

        // width proportional to the linewidth: peak height scales as 1/gamma
        const LayerStack s2 = drude_stack(2e-6, 1.189, 1.0, 0.3);
        const double k2 = find_guided_roots(s2, 1.08, Polarization::p).back().k;
        const double at_peak2 = gi.rate_density(s2, 1.08, k2).dgamma_x_p;
        CHECK(at_peak * 1e-6 == doctest::Approx(at_peak2 * 2e-6).epsilon(0.2));
    }
}

TEST_CASE("symmetric stacks give symmetric breakdowns")
{
    const GreenIntegrator gi;
    LayerStack a = drude_stack(1e-3, 1.189, 0.6, 0.3);
    LayerStack b = a;
    b.z0_prime = a.d3_prime - a.z0_prime;
    const RawBreakdown ba = gi.total_breakdown(a, 1.08);
    const RawBreakdown bb = gi.total_breakdown(b, 1.08);
    CHECK(ba.radiation.total() == doctest::Approx(bb.radiation.total()).epsilon(1e-10));
    CHECK(ba.guided.total() == doctest::Approx(bb.guided.total()).epsilon(1e-10));
    CHECK(ba.evanescent.total() == doctest::Approx(bb.evanescent.total()).epsilon(1e-10));
}

TEST_CASE("class rates stay nonnegative for passive media")
{
    const GreenIntegrator gi;
    for (double d3 : {0.1, 0.5, 1.0, 3.3}) {
        LayerStack s = drude_stack(1e-3, 1.189, d3, 0.5);
        const RawBreakdown b = gi.total_breakdown(s, 1.08);
        for (const ClassRates* c : {&b.radiation, &b.substrate, &b.guided, &b.evanescent}) {
            CHECK(c->x_p >= -1e-9);
            CHECK(c->x_s >= -1e-9);
            CHECK(c->z_p >= -1e-9);
        }
    }
}

TEST_CASE("guided quadrature at weak absorption matches the residue sums")
{
    IntegratorOptions force_quad;
    force_quad.residue_switch_gamma = 0.0;
    const GreenIntegrator quad(force_quad);
    IntegratorOptions force_res;
    force_res.residue_switch_gamma = 1.0;
    const GreenIntegrator res(force_res);

    for (double d3 : {0.7, 1.0, 3.3, 4.0}) {
        const LayerStack s = drude_stack(1e-8, 1.25, d3, 0.25);
        const double q = quad.integrate_class(s, 1.09, ModeRegion::guided).total();
        const double r = res.integrate_class(s, 1.09, ModeRegion::guided).total();
        CHECK_MESSAGE(std::abs(q - r) / r < 0.02, "d3=", d3, " q=", q, " r=", r);
    }
}

TEST_CASE("method switch at the absorption threshold")
{
    const GreenIntegrator gi; // switch at 1e-8
    const LayerStack weak = drude_stack(1e-10, 1.25, 1.0, 0.25);
    const LayerStack strong = drude_stack(1e-3, 1.25, 1.0, 0.25);
    CHECK(gi.integrate_class(weak, 1.09, ModeRegion::guided).method == "residue");
    CHECK(gi.integrate_class(strong, 1.09, ModeRegion::guided).method == "quadrature");

    SUBCASE("comparison record on demand")
    {
        IntegratorOptions o;
        o.compare_methods = true;
        const GreenIntegrator gc(o);
        const RawBreakdown b = gc.total_breakdown(drude_stack(1e-8, 1.25, 1.0, 0.25), 1.09);
        CHECK(b.guided_cmp.computed);
        CHECK(b.guided_cmp.rel_diff < 0.02);
    }
}

TEST_CASE("enhancement peak scales as one over square root of absorption")
{
    // thickness just past the first pair birth; the peak is razor thin in
    // omega (width tracks the absorption), so locate it per gamma
    const double d3 = 3.068715494;
    IntegratorOptions o;
    o.residue_switch_gamma = 0.0;
    const GreenIntegrator gi(o);
    auto peak_rate = [&](double g) {
        auto rate = [&](double w) {
            return gi.integrate_class(drude_stack(g, 1.25, d3, 0.25), w, ModeRegion::guided)
                .total();
        };
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = 1.0895, b = 1.0905;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = rate(c), fd = rate(d);
        for (int i = 0; i < 64; ++i) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = rate(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = rate(d);
            }
        }
        return rate(0.5 * (a + b));
    };
    const double r10 = peak_rate(1e-10), r8 = peak_rate(1e-8);
    CHECK(r10 / r8 == doctest::Approx(10.0).epsilon(0.05));
    CHECK(r10 > 2e3);
}

TEST_CASE("radiation-class rate is of order one for the reference guide")
{
    const GreenIntegrator gi;
    for (double d3 : {0.5, 1.0, 3.0, 6.0}) {
        const LayerStack s = drude_stack(1e-10, 1.25, d3, 0.25);
        const double rad = 0.5 * gi.integrate_class(s, 1.09, ModeRegion::radiation).total();
        CHECK(rad > 0.05);
        CHECK(rad < 5.0);
    }
}

TEST_CASE("guided class dwarfs every other class at the enhancement peak")
{
    // near the first pair birth the guided entries exceed all radiation,
    // substrate and surface entries by far more than 1e2
    const GreenIntegrator gi;
    const LayerStack s = drude_stack(1e-10, 1.25, 3.0687154936018346, 0.25);
    IntegratorOptions fq;
    fq.residue_switch_gamma = 0.0;
    const GreenIntegrator quad(fq);
    const double guided =
        quad.integrate_class(s, 1.0900603575, ModeRegion::guided).total();
    const RawBreakdown rest = gi.total_breakdown(s, 1.0900603575);
    const double others = rest.radiation.total() + rest.substrate.total() +
                          rest.evanescent.total();
    CHECK(guided > 1e2 * others);
}

TEST_CASE("ordering violations: hard for dispersive guides, advisory for fixed")
{
    const GreenIntegrator gi;
    SUBCASE("dispersive middle layer below the claddings is rejected")
    {
        LayerStack s = drude_stack(1e-3, 1.189, 1.0, 0.5);
        s.layer1 = MaterialModel::make_fixed({9.0, 0.0}, {1.0, 0.0});
        s.layer2 = s.layer1;
        CHECK_THROWS_AS(gi.total_breakdown(s, 1.08), std::invalid_argument);
    }
    SUBCASE("fixed-media cross-check stacks pass through")
    {
        CHECK_NOTHROW(gi.total_breakdown(homogeneous(1.5), 1.0));
    }
    SUBCASE("bad geometry is always rejected")
    {
        LayerStack s = vacuum3();
        s.z0_prime = 2.0;
        CHECK_THROWS_AS(gi.total_breakdown(s, 1.0), std::invalid_argument);
    }
}
