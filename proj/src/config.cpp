#include "nriwg/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

namespace nriwg {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

LayerStack ScanConfig::materialize(double axis_value) const
{
    LayerStack s;
    s.layer1 = layer1;
    s.layer2 = layer2;
    s.layer3 = layer3;
    s.d3_prime = d3_prime;
    double z0 = z0_value;
    if (sweep) {
        switch (sweep->axis) {
        case SweepAxis::d3_prime:
            s.d3_prime = axis_value;
            break;
        case SweepAxis::z0_prime:
            z0 = axis_value;
            break;
        case SweepAxis::omega:
            break;
        case SweepAxis::gamma_absorption:
            s.layer3.gamma_e = axis_value;
            s.layer3.gamma_m = axis_value;
            break;
        }
    }
    s.z0_prime = z0_is_fraction ? z0 * s.d3_prime : z0;
    return s;
}

double ScanConfig::omega_at(double axis_value) const
{
    if (sweep && sweep->axis == SweepAxis::omega)
        return axis_value;
    return omega;
}

json material_to_json(const MaterialModel& m)
{
    json j;
    if (m.kind == MaterialModel::Kind::fixed) {
        j["kind"] = "fixed";
        j["eps"] = {m.eps.real(), m.eps.imag()};
        j["mu"] = {m.mu.real(), m.mu.imag()};
    } else {
        j["kind"] = "drude_lorentz";
        j["omega_pe"] = m.omega_pe;
        j["omega_te"] = m.omega_te;
        j["gamma_e"] = m.gamma_e;
        j["omega_pm"] = m.omega_pm;
        j["omega_tm"] = m.omega_tm;
        j["gamma_m"] = m.gamma_m;
    }
    return j;
}

MaterialModel material_from_json(const json& j, std::vector<std::string>& errors,
                                 const std::string& where)
{
    MaterialModel m = MaterialModel::vacuum();
    if (!j.is_object()) {
        errors.push_back(where + ": expected an object");
        return m;
    }
    const std::string kind = j.value("kind", "");
    auto complex_field = [&](const char* name, cplx& out) {
        if (!j.contains(name)) {
            errors.push_back(where + ": missing field '" + name + "'");
            return;
        }
        const auto& v = j.at(name);
        if (v.is_number()) {
            out = cplx(v.get<double>(), 0.0);
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            out = cplx(v[0].get<double>(), v[1].get<double>());
        } else {
            errors.push_back(where + ": field '" + name + "' must be a number or [re, im]");
        }
    };
    auto number_field = [&](const char* name, double& out, bool positive) {
        if (!j.contains(name)) {
            errors.push_back(where + ": missing field '" + name + "'");
            return;
        }
        if (!j.at(name).is_number()) {
            errors.push_back(where + ": field '" + name + "' must be a number");
            return;
        }
        out = j.at(name).get<double>();
        if (positive && !(out > 0))
            errors.push_back(where + ": field '" + name + "' must be positive");
        if (!positive && out < 0)
            errors.push_back(where + ": field '" + name + "' must be nonnegative");
    };

    if (kind == "fixed") {
        m.kind = MaterialModel::Kind::fixed;
        complex_field("eps", m.eps);
        complex_field("mu", m.mu);
    } else if (kind == "drude_lorentz") {
        m.kind = MaterialModel::Kind::drude_lorentz;
        number_field("omega_pe", m.omega_pe, true);
        number_field("omega_te", m.omega_te, true);
        number_field("gamma_e", m.gamma_e, false);
        number_field("omega_pm", m.omega_pm, true);
        number_field("omega_tm", m.omega_tm, true);
        number_field("gamma_m", m.gamma_m, false);
    } else {
        errors.push_back(where + ": 'kind' must be \"fixed\" or \"drude_lorentz\"");
    }
    return m;
}

ConfigParse validate_config(const json& raw)
{
    ConfigParse out;
    std::vector<std::string>& errors = out.errors;
    ScanConfig cfg;

    if (!raw.is_object()) {
        errors.push_back("config: expected a JSON object");
        return out;
    }
    if (!raw.contains("stack") || !raw.at("stack").is_object()) {
        errors.push_back("config: missing 'stack' object");
    } else {
        const json& st = raw.at("stack");
        for (const char* name : {"layer1", "layer2", "layer3"}) {
            if (!st.contains(name))
                errors.push_back(std::string("stack: missing '") + name + "'");
        }
        if (st.contains("layer1"))
            cfg.layer1 = material_from_json(st.at("layer1"), errors, "stack.layer1");
        if (st.contains("layer2"))
            cfg.layer2 = material_from_json(st.at("layer2"), errors, "stack.layer2");
        if (st.contains("layer3"))
            cfg.layer3 = material_from_json(st.at("layer3"), errors, "stack.layer3");

        if (!st.contains("d3_prime") || !st.at("d3_prime").is_number())
            errors.push_back("stack: missing numeric 'd3_prime'");
        else {
            cfg.d3_prime = st.at("d3_prime").get<double>();
            if (!(cfg.d3_prime > 0))
                errors.push_back("stack: d3_prime must be positive");
        }
        if (!st.contains("z0_prime")) {
            errors.push_back("stack: missing 'z0_prime'");
        } else {
            const json& z = st.at("z0_prime");
            if (z.is_number()) {
                cfg.z0_is_fraction = false;
                cfg.z0_value = z.get<double>();
            } else if (z.is_object() && z.contains("fraction") && z.at("fraction").is_number()) {
                cfg.z0_is_fraction = true;
                cfg.z0_value = z.at("fraction").get<double>();
            } else if (z.is_object() && z.contains("absolute") && z.at("absolute").is_number()) {
                cfg.z0_is_fraction = false;
                cfg.z0_value = z.at("absolute").get<double>();
            } else {
                errors.push_back("stack: z0_prime must be a number, {\"fraction\": f} or {\"absolute\": z}");
            }
            if (cfg.z0_is_fraction && !(cfg.z0_value > 0 && cfg.z0_value < 1))
                errors.push_back("stack: z0_prime fraction must lie in (0, 1)");
            if (!cfg.z0_is_fraction && !(cfg.z0_value > 0 && cfg.z0_value < cfg.d3_prime))
                errors.push_back("stack: absolute z0_prime must lie in (0, d3_prime)");
        }
    }

    if (!raw.contains("omega") || !raw.at("omega").is_number())
        errors.push_back("config: missing numeric 'omega'");
    else {
        cfg.omega = raw.at("omega").get<double>();
        if (!(cfg.omega > 0))
            errors.push_back("config: omega must be positive");
    }

    if (raw.contains("sweep")) {
        const json& sw = raw.at("sweep");
        SweepSpec spec;
        const std::string axis = sw.value("axis", "");
        if (axis == "d3_prime")
            spec.axis = SweepAxis::d3_prime;
        else if (axis == "z0_prime")
            spec.axis = SweepAxis::z0_prime;
        else if (axis == "omega")
            spec.axis = SweepAxis::omega;
        else if (axis == "gamma_absorption")
            spec.axis = SweepAxis::gamma_absorption;
        else
            errors.push_back("sweep: axis must be one of d3_prime, z0_prime, omega, gamma_absorption");
        if (!sw.contains("lo") || !sw.contains("hi") || !sw.at("lo").is_number() ||
            !sw.at("hi").is_number())
            errors.push_back("sweep: missing numeric 'lo'/'hi'");
        else {
            spec.lo = sw.at("lo").get<double>();
            spec.hi = sw.at("hi").get<double>();
            if (!(spec.lo < spec.hi))
                errors.push_back("sweep: require lo < hi");
        }
        spec.points = sw.value("points", 0);
        if (spec.points < 2)
            errors.push_back("sweep: points must be >= 2");
        if (spec.axis == SweepAxis::z0_prime && errors.empty()) {
            const double d3 = cfg.d3_prime;
            if (cfg.z0_is_fraction ? !(spec.lo > 0 && spec.hi < 1)
                                   : !(spec.lo > 0 && spec.hi < d3))
                errors.push_back("sweep: z0_prime range must stay inside the middle layer");
        }
        if (spec.axis == SweepAxis::gamma_absorption) {
            if (cfg.layer3.kind != MaterialModel::Kind::drude_lorentz)
                errors.push_back("sweep: gamma_absorption sweep needs a drude_lorentz middle layer");
            if (spec.lo < 0)
                errors.push_back("sweep: gamma_absorption must be nonnegative");
        }
        cfg.sweep = spec;
    }

    if (raw.contains("method")) {
        const json& m = raw.at("method");
        cfg.method.rel_tol = m.value("quad_rel_tol", cfg.method.rel_tol);
        cfg.method.residue_switch_gamma =
            m.value("residue_switch_gamma", cfg.method.residue_switch_gamma);
        cfg.method.compare_methods = m.value("compare_methods", cfg.method.compare_methods);
        if (!(cfg.method.rel_tol > 0 && cfg.method.rel_tol < 1))
            errors.push_back("method: quad_rel_tol must lie in (0, 1)");
    }

    cfg.jobs = raw.value("jobs", 1);
    if (cfg.jobs < 1)
        errors.push_back("config: jobs must be >= 1");

    if (errors.empty())
        out.config = cfg;
    return out;
}

json config_to_json(const ScanConfig& cfg)
{
    json j;
    j["stack"]["layer1"] = material_to_json(cfg.layer1);
    j["stack"]["layer2"] = material_to_json(cfg.layer2);
    j["stack"]["layer3"] = material_to_json(cfg.layer3);
    j["stack"]["d3_prime"] = cfg.d3_prime;
    if (cfg.z0_is_fraction)
        j["stack"]["z0_prime"] = {{"fraction", cfg.z0_value}};
    else
        j["stack"]["z0_prime"] = cfg.z0_value;
    j["omega"] = cfg.omega;
    if (cfg.sweep) {
        const char* axis = nullptr;
        switch (cfg.sweep->axis) {
        case SweepAxis::d3_prime: axis = "d3_prime"; break;
        case SweepAxis::z0_prime: axis = "z0_prime"; break;
        case SweepAxis::omega: axis = "omega"; break;
        case SweepAxis::gamma_absorption: axis = "gamma_absorption"; break;
        }
        j["sweep"] = {{"axis", axis}, {"lo", cfg.sweep->lo}, {"hi", cfg.sweep->hi},
                      {"points", cfg.sweep->points}};
    }
    j["method"] = {{"quad_rel_tol", cfg.method.rel_tol},
                   {"residue_switch_gamma", cfg.method.residue_switch_gamma},
                   {"compare_methods", cfg.method.compare_methods}};
    j["jobs"] = cfg.jobs;
    return j;
}

static json cplx_json(cplx v)
{
    return json::array({v.real(), v.imag()});
}

json em_eval_json(const LayerStack& s, double omega, double k)
{
    const TransverseContext c = make_context(s, omega, k);
    json j;
    j["omega"] = omega;
    j["k"] = k;
    j["eta1"] = cplx_json(c.eta1);
    j["eta2"] = cplx_json(c.eta2);
    j["eta3"] = cplx_json(c.eta3);
    j["beta1"] = cplx_json(c.beta1);
    j["beta2"] = cplx_json(c.beta2);
    j["beta3"] = cplx_json(c.beta3);
    for (Polarization q : {Polarization::p, Polarization::s}) {
        json& sect = j[q == Polarization::p ? "p" : "s"];
        const cplx r31 = fresnel(q, 3, 1, c);
        const cplx r32 = fresnel(q, 3, 2, c);
        sect["r31"] = cplx_json(r31);
        sect["r32"] = cplx_json(r32);
        sect["D"] = cplx_json(d_factor(q, c));
        sect["dD_dk"] = cplx_json(d_factor_derivative(q, c));
        const auto [ip, im] = i_factors(q, c);
        sect["I_plus"] = cplx_json(ip);
        sect["I_minus"] = cplx_json(im);
        try {
            sect["guided_phase_31"] = guided_phase(q, c, 1);
            sect["guided_phase_32"] = guided_phase(q, c, 2);
        } catch (const std::exception&) {
            sect["guided_phase_31"] = nullptr;
            sect["guided_phase_32"] = nullptr;
        }
        try {
            sect["surface_phase_31"] = surface_phase(q, c, 1);
            sect["surface_phase_32"] = surface_phase(q, c, 2);
        } catch (const std::exception&) {
            sect["surface_phase_31"] = nullptr;
            sect["surface_phase_32"] = nullptr;
        }
    }
    try {
        j["chi1"] = cplx_json(chi(1, c));
        j["chi2"] = cplx_json(chi(2, c));
    } catch (const std::exception&) {
        j["chi1"] = nullptr;
        j["chi2"] = nullptr;
    }
    return j;
}

json breakdown_to_json(const RateBreakdown& bd)
{
    json j;
    auto cls = [&](RateClass c, const char* name) {
        json e;
        e["p_x"] = bd.entry(c, Polarization::p, DipoleComponent::x);
        e["p_z"] = bd.entry(c, Polarization::p, DipoleComponent::z);
        e["s_x"] = bd.entry(c, Polarization::s, DipoleComponent::x);
        e["total"] = bd.class_total(c);
        j[name] = e;
    };
    cls(RateClass::radiation, "radiation");
    cls(RateClass::substrate, "substrate");
    cls(RateClass::guided, "guided");
    cls(RateClass::surface, "surface");
    j["gamma_x"] = bd.gamma_x;
    j["gamma_z"] = bd.gamma_z;
    j["gamma_total"] = bd.gamma_n;
    j["kappa"] = bd.kappa;
    j["error_estimate"] = bd.error;
    j["guided_method"] = bd.guided_method;
    j["surface_method"] = bd.surface_method;
    return j;
}

std::string config_hash(const json& j)
{
    const std::string s = j.dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

} // namespace nriwg
