#include <doctest.h>

#include "nriwg/em_core.hpp"

#include <cmath>

using namespace nriwg;

namespace {

LayerStack nri_stack(double d3 = 3.0, double z0 = 0.75)
{
    LayerStack s;
    s.layer1 = MaterialModel::vacuum();
    s.layer2 = MaterialModel::vacuum();
    s.layer3 = MaterialModel::make_fixed({-1.99, 0.0}, {-1.99, 0.0});
    s.d3_prime = d3;
    s.z0_prime = z0;
    return s;
}

LayerStack uniform_stack(double n)
{
    LayerStack s;
    s.layer1 = MaterialModel::make_fixed({n, 0.0}, {n, 0.0});
    s.layer2 = s.layer1;
    s.layer3 = s.layer1;
    s.d3_prime = 2.0;
    s.z0_prime = 1.0;
    return s;
}

// Independent multiple-reflection oracle: solve the up/down amplitude pair
// A_up = s_up + u A_down, A_down = s_down + v A_up by Cramer's rule and
// compare the self-field combination against I_+- / D.
cplx bounce_oracle(const TransverseContext& c, Polarization q, int sign)
{
    const cplx u = fresnel(q, 3, 1, c) * std::exp(cplx(0, 2) * c.beta3 * c.z0_prime);
    const cplx v = fresnel(q, 3, 2, c) *
                   std::exp(cplx(0, 2) * c.beta3 * (c.d3_prime - c.z0_prime));
    const cplx s_up = 1.0, s_down = (double)sign;
    const cplx det = 1.0 - u * v;
    const cplx a_up = (s_up + u * s_down) / det;
    return a_up * (1.0 + (double)sign * v);
}

} // namespace

TEST_CASE("beta branch selection")
{
    const LayerStack s = nri_stack();

    SUBCASE("vacuum propagating")
    {
        CHECK(layer_beta(s, 1, 1.0, 0.5).real() == doctest::Approx(std::sqrt(0.75)));
        CHECK(layer_beta(s, 1, 1.0, 0.5).imag() == 0.0);
    }
    SUBCASE("vacuum evanescent")
    {
        const cplx b = layer_beta(s, 1, 1.0, 1.5);
        CHECK(b.real() == 0.0);
        CHECK(b.imag() == doctest::Approx(std::sqrt(1.25)));
    }
    SUBCASE("left-handed layer takes the negative propagating root")
    {
        const cplx b = layer_beta(s, 3, 1.0, 0.5);
        CHECK(b.real() == doctest::Approx(-std::sqrt(3.9601 - 0.25)));
        CHECK(b.imag() == 0.0);
    }
    SUBCASE("evanescent branch is independent of handedness")
    {
        const cplx b = layer_beta(s, 3, 1.0, 2.5);
        CHECK(b.real() == 0.0);
        CHECK(b.imag() == doctest::Approx(std::sqrt(6.25 - 3.9601)));
    }
    SUBCASE("lossy NRI layer decays in both propagating and evanescent regions")
    {
        LayerStack lossy = s;
        lossy.layer3 = MaterialModel::make_drude_lorentz(1.25, 1, 1e-3, 1.189, 1, 1e-3);
        CHECK(layer_beta(lossy, 3, 1.08, 0.5).imag() > 0.0);
        CHECK(layer_beta(lossy, 3, 1.08, 3.0).imag() > 0.0);
    }
}

TEST_CASE("beta approaches the lossless branch as absorption vanishes")
{
    LayerStack s = nri_stack();
    const cplx ref = layer_beta(s, 3, 1.09, 1.3);
    double prev = 1e300;
    for (double g : {1e-4, 1e-6, 1e-8}) {
        LayerStack lossy = s;
        lossy.layer3 = MaterialModel::make_drude_lorentz(1.25, 1, g, 1.25, 1, g);
        // compare against the snapshot's own real parts to isolate the branch
        LayerStack snap = lossless_snapshot(lossy, 1.09);
        const cplx b = layer_beta(lossy, 3, 1.09, 1.3);
        const cplx b0 = layer_beta(snap, 3, 1.09, 1.3);
        const double dist = std::abs(b - b0);
        CHECK(dist < prev);
        prev = dist;
    }
    CHECK(ref.real() < 0.0);
}

TEST_CASE("fresnel coefficients")
{
    SUBCASE("no index contrast, no reflection")
    {
        const TransverseContext c = make_context(uniform_stack(1.4), 1.0, 0.7);
        CHECK(std::abs(fresnel(Polarization::p, 3, 1, c)) == doctest::Approx(0.0));
        CHECK(std::abs(fresnel(Polarization::s, 3, 2, c)) == doctest::Approx(0.0));
    }
    SUBCASE("impedance-matched NRI against vacuum at normal incidence")
    {
        const TransverseContext c = make_context(nri_stack(), 1.0, 0.0);
        CHECK(std::abs(fresnel(Polarization::p, 3, 1, c)) < 1e-12);
    }
    SUBCASE("reciprocity r_ij = -r_ji")
    {
        for (double k : {0.3, 0.9, 1.4, 2.2, 5.0}) {
            const TransverseContext c = make_context(nri_stack(), 1.0, k);
            for (Polarization q : {Polarization::p, Polarization::s}) {
                const cplx rij = fresnel(q, 3, 1, c);
                const cplx rji = fresnel(q, 1, 3, c);
                CHECK(std::abs(rij + rji) < 1e-12 * (1.0 + std::abs(rij)));
            }
        }
    }
    SUBCASE("positive-index pairs never exceed unit modulus")
    {
        LayerStack s = uniform_stack(1.0);
        s.layer3 = MaterialModel::make_fixed({2.0, 0.0}, {2.0, 0.0});
        for (int i = 1; i <= 40; ++i) {
            const double k = 0.03 * i;
            const TransverseContext c = make_context(s, 1.0, k);
            CHECK(std::abs(fresnel(Polarization::p, 3, 1, c)) <= 1.0 + 1e-12);
            CHECK(std::abs(fresnel(Polarization::s, 3, 1, c)) <= 1.0 + 1e-12);
        }
    }
    SUBCASE("NRI interfaces can reflect with modulus above 1")
    {
        bool found = false;
        for (int i = 0; i <= 100; ++i) {
            const double k = 2.0 + 0.18 * i;
            const TransverseContext c = make_context(nri_stack(), 1.0, k);
            if (std::abs(fresnel(Polarization::p, 3, 1, c)) > 1.0)
                found = true;
        }
        CHECK(found);
    }
}

TEST_CASE("waveguide denominator")
{
    SUBCASE("uniform medium gives D = 1")
    {
        const TransverseContext c = make_context(uniform_stack(1.7), 1.0, 0.8);
        CHECK(d_factor(Polarization::p, c).real() == doctest::Approx(1.0));
        CHECK(std::abs(d_factor(Polarization::p, c).imag()) < 1e-14);
    }
    SUBCASE("zero thickness reduces to 1 - r31 r32")
    {
        TransverseContext c = make_context(nri_stack(), 1.0, 1.3);
        c.d3_prime = 0.0;
        const cplx expect =
            1.0 - fresnel(Polarization::p, 3, 1, c) * fresnel(Polarization::p, 3, 2, c);
        CHECK(std::abs(d_factor(Polarization::p, c) - expect) < 1e-14);
    }
    SUBCASE("analytic derivative matches central differences")
    {
        for (double k : {0.4, 1.2, 1.8, 2.6, 7.0}) {
            for (Polarization q : {Polarization::p, Polarization::s}) {
                const double h = 1e-7 * std::max(1.0, k);
                const cplx dm = d_factor(q, make_context(nri_stack(), 1.0, k - h));
                const cplx dp = d_factor(q, make_context(nri_stack(), 1.0, k + h));
                const cplx fd = (dp - dm) / (2.0 * h);
                const cplx an = d_factor_derivative(q, make_context(nri_stack(), 1.0, k));
                CHECK(std::abs(an - fd) < 1e-5 * std::max(1.0, std::abs(an)));
            }
        }
    }
}

TEST_CASE("source factors I_+-")
{
    SUBCASE("no reflections give unity")
    {
        const TransverseContext c = make_context(uniform_stack(1.7), 1.0, 0.8);
        const auto [ip, im] = i_factors(Polarization::p, c);
        CHECK(std::abs(ip - 1.0) < 1e-14);
        CHECK(std::abs(im - 1.0) < 1e-14);
    }
    SUBCASE("centered source in a symmetric stack has equal factors")
    {
        const TransverseContext c = make_context(nri_stack(3.0, 1.5), 1.0, 1.3);
        const cplx u = fresnel(Polarization::p, 3, 1, c) *
                       std::exp(cplx(0, 2) * c.beta3 * c.z0_prime);
        const cplx v = fresnel(Polarization::p, 3, 2, c) *
                       std::exp(cplx(0, 2) * c.beta3 * (c.d3_prime - c.z0_prime));
        CHECK(std::abs(u - v) < 1e-14);
    }
    SUBCASE("multiple-reflection solve reproduces I/D at off-center points")
    {
        for (double k : {0.5, 1.2, 2.4}) {
            const TransverseContext c = make_context(nri_stack(3.0, 0.75), 1.0, k);
            for (Polarization q : {Polarization::p, Polarization::s}) {
                const auto [ip, im] = i_factors(q, c);
                const cplx d = d_factor(q, c);
                CHECK(std::abs(ip / d - bounce_oracle(c, q, +1)) <
                      1e-10 * std::max(1.0, std::abs(ip / d)));
                CHECK(std::abs(im / d - bounce_oracle(c, q, -1)) <
                      1e-10 * std::max(1.0, std::abs(im / d)));
            }
        }
    }
}

TEST_CASE("guided-region reflection phase")
{
    const LayerStack s = nri_stack();

    SUBCASE("unit reflection at mode birth has zero phase")
    {
        const TransverseContext c = make_context(s, 1.0, 1.0);
        CHECK(guided_phase(Polarization::p, c, 1) == doctest::Approx(0.0));
    }
    SUBCASE("r = -1 folds to pi/2")
    {
        const double k = std::sqrt(3.9601 - 1e-12);
        const TransverseContext c = make_context(s, 1.0, k);
        CHECK(guided_phase(Polarization::p, c, 1) == doctest::Approx(M_PI / 2).epsilon(1e-4));
    }
    SUBCASE("interior value lies in (0, pi/2) and matches closed form")
    {
        const TransverseContext c = make_context(s, 1.0, 1.2);
        const double phi = guided_phase(Polarization::p, c, 1);
        CHECK(phi == doctest::Approx(0.6936647).epsilon(1e-5));
        CHECK(phi > 0.0);
        CHECK(phi < M_PI / 2);
        CHECK(guided_phase(Polarization::p, c, 1, PhaseFold::mod_half_pi) ==
              doctest::Approx(phi));
    }
    SUBCASE("outside the unimodular region it refuses")
    {
        const TransverseContext c = make_context(s, 1.0, 0.5);
        CHECK_THROWS_AS(guided_phase(Polarization::p, c, 1), std::domain_error);
    }
}

TEST_CASE("surface-region reflection phase")
{
    const LayerStack s = nri_stack();
    SUBCASE("matches log of the real reflection coefficient")
    {
        for (double k : {2.5, 6.0, 50.0}) {
            const TransverseContext c = make_context(s, 1.0, k);
            const cplx r = fresnel(Polarization::p, 3, 1, c);
            REQUIRE(r.real() < -1.0);
            CHECK(surface_phase(Polarization::p, c, 1) ==
                  doctest::Approx(std::log(-r.real()) / 2.0));
        }
    }
    SUBCASE("saturates at the single-interface value for large k")
    {
        const TransverseContext c = make_context(s, 1.0, 500.0);
        CHECK(surface_phase(Polarization::p, c, 1) ==
              doctest::Approx(0.5 * std::log(2.99 / 0.99)).epsilon(1e-4));
    }
    SUBCASE("rejects propagating-region input")
    {
        const TransverseContext c = make_context(s, 1.0, 0.5);
        CHECK_THROWS_AS(surface_phase(Polarization::p, c, 1), std::domain_error);
    }
}

TEST_CASE("chi and the Goos-Haenchen denominator terms")
{
    const LayerStack s = nri_stack();

    SUBCASE("identical layers zero the numerator")
    {
        const TransverseContext c = make_context(uniform_stack(1.5), 1.0, 0.8);
        CHECK(std::abs(chi(1, c)) == doctest::Approx(0.0));
    }
    SUBCASE("literal value at k = 1.2")
    {
        const TransverseContext c = make_context(s, 1.0, 1.2);
        CHECK(chi(1, c).real() == doctest::Approx(2.9601 / 0.77766).epsilon(1e-4));
        CHECK(chi(1, c).imag() == doctest::Approx(0.0));
    }
    SUBCASE("resonant denominator is flagged")
    {
        // eps1^2 (eta3 - k^2) + eps3^2 (eta1 - k^2) = 0 at k^2 = 2 eta3/(1 + eps3^2)
        const TransverseContext c = make_context(s, 1.0, std::sqrt(7.9202 / 4.9601));
        CHECK_THROWS_AS(chi(1, c), std::domain_error);
    }
    SUBCASE("guided GH term is negative and equals the phase derivative")
    {
        const double k = 1.2, h = 1e-6;
        const TransverseContext c = make_context(s, 1.0, k);
        const double term = gh_term_guided(Polarization::p, 1, c);
        CHECK(term == doctest::Approx(-2.0833596).epsilon(1e-5));

        const double B3 = std::sqrt(3.9601 - k * k);
        const double dphi =
            (guided_phase(Polarization::p, make_context(s, 1.0, k + h), 1) -
             guided_phase(Polarization::p, make_context(s, 1.0, k - h), 1)) /
            (2.0 * h);
        CHECK(term == doctest::Approx(-(B3 / k) * dphi).epsilon(1e-5));
    }
    SUBCASE("surface GH term is positive and equals the phase derivative")
    {
        const double k = 2.5, h = 1e-6;
        const TransverseContext c = make_context(s, 1.0, k);
        const double term = gh_term_surface(Polarization::p, 1, c);
        CHECK(term > 0.0);

        const double B3 = std::sqrt(k * k - 3.9601);
        const double dphi =
            (surface_phase(Polarization::p, make_context(s, 1.0, k + h), 1) -
             surface_phase(Polarization::p, make_context(s, 1.0, k - h), 1)) /
            (2.0 * h);
        CHECK(term == doctest::Approx((B3 / k) * dphi).epsilon(1e-5));
    }
    SUBCASE("mode-birth limit diverges through the 1/beta_i prefactor")
    {
        const TransverseContext c = make_context(s, 1.0, 1.0 + 1e-13);
        CHECK_THROWS_AS(gh_term_guided(Polarization::p, 1, c), std::domain_error);
    }
}
