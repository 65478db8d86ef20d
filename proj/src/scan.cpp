#include "nriwg/scan.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace nriwg {

namespace {

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters)
{
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

struct RowSlot {
    RateBreakdown bd;
    bool ok = false;
    std::string error;
};

} // namespace

ScanResult run_scan(const ScanConfig& cfg)
{
    ScanResult out;
    if (cfg.sweep)
        out.axis_values = linspace(cfg.sweep->lo, cfg.sweep->hi, cfg.sweep->points);
    else
        out.axis_values = {0.0};

    const GreenIntegrator integrator(cfg.method);
    const std::size_t n = out.axis_values.size();
    std::vector<RowSlot> slots(n);

    auto compute = [&](std::size_t i) {
        const double ax = out.axis_values[i];
        try {
            const LayerStack stack = cfg.materialize(ax);
            const double w = cfg.omega_at(ax);
            slots[i].bd = assemble(integrator.total_breakdown(stack, w));
            slots[i].ok = true;
        } catch (const std::exception& e) {
            slots[i].error = e.what();
        }
    };

    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i)
            compute(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int workers = std::min<std::size_t>(jobs, n);
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n)
                        return;
                    compute(i);
                }
            });
        for (auto& th : pool)
            th.join();
    }

    std::string csv = scan_csv_header;
    csv += "\n";
    int failures = 0;
    std::string guided_method, surface_method;
    bool methods_mixed = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double ax = out.axis_values[i];
        const LayerStack stack = cfg.materialize(ax);
        const double w = cfg.omega_at(ax);
        const RowSlot& slot = slots[i];
        const RateBreakdown& bd = slot.bd;
        if (!slot.ok || (bd.error > 0 && !std::isfinite(bd.error)))
            ++failures;
        else if (!bd.converged)
            ++failures;

        auto num = [&](double v) { return format_double(v); };
        const double nan = std::numeric_limits<double>::quiet_NaN();
        auto val = [&](double v) { return slot.ok ? v : nan; };

        csv += num(stack.d3_prime) + "," + num(stack.z0_prime) + "," + num(w) + "," +
               num(middle_layer_absorption(stack, w));
        csv += "," + num(val(bd.class_total(RateClass::radiation)));
        csv += "," + num(val(bd.class_total(RateClass::substrate)));
        csv += "," + num(val(bd.class_total(RateClass::guided)));
        csv += "," + num(val(bd.class_total(RateClass::surface)));
        csv += "," + num(val(bd.gamma_x)) + "," + num(val(bd.gamma_z)) + "," +
               num(val(bd.gamma_n)) + "," + num(val(bd.kappa));
        for (RateClass c : {RateClass::radiation, RateClass::substrate, RateClass::guided,
                            RateClass::surface}) {
            csv += "," + num(val(bd.entry(c, Polarization::p, DipoleComponent::x)));
            csv += "," + num(val(bd.entry(c, Polarization::p, DipoleComponent::z)));
            csv += "," + num(val(bd.entry(c, Polarization::s, DipoleComponent::x)));
        }
        csv += "," + num(slot.ok ? bd.error : std::numeric_limits<double>::infinity());
        csv += "\n";

        if (slot.ok) {
            if (guided_method.empty()) {
                guided_method = bd.guided_method;
                surface_method = bd.surface_method;
            } else if (guided_method != bd.guided_method ||
                       surface_method != bd.surface_method) {
                methods_mixed = true;
            }
        }
        out.rows.push_back(bd);
    }

    out.csv = csv;
    out.tolerance_failures = failures;

    const json cfg_json = config_to_json(cfg);
    out.sidecar["config"] = cfg_json;
    out.sidecar["config_hash"] = config_hash(cfg_json);
    out.sidecar["rows"] = n;
    out.sidecar["tolerance_failures"] = failures;
    json row_errors = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        if (!slots[i].ok)
            row_errors.push_back({{"row", i}, {"error", slots[i].error}});
    }
    if (!row_errors.empty())
        out.sidecar["row_errors"] = row_errors;
    out.sidecar["methods"] = {{"guided", methods_mixed ? "mixed" : guided_method},
                              {"surface", methods_mixed ? "mixed" : surface_method}};
    out.sidecar["quad_rel_tol"] = cfg.method.rel_tol;
    return out;
}

namespace {

MaterialModel fig2_middle(double gamma)
{
    return MaterialModel::make_drude_lorentz(1.25, 1.0, gamma, 1.25, 1.0, gamma);
}

MaterialModel fig5_middle(double gamma)
{
    return MaterialModel::make_drude_lorentz(1.25, 1.0, gamma, 1.189, 1.0, gamma);
}

ScanConfig base_config()
{
    ScanConfig cfg;
    cfg.layer1 = MaterialModel::vacuum();
    cfg.layer2 = MaterialModel::vacuum();
    return cfg;
}

// First pair-birth thickness of the guided p modes beyond d3' = 2.5 (the
// tangency of the dispersion function, where the mode density diverges and
// the strong enhancement peak sits). Bisection on the root count of the
// lossless kernel.
double first_peak_thickness(const ScanConfig& cfg, double omega)
{
    auto count = [&](double d3) {
        LayerStack s = cfg.materialize(0);
        s.d3_prime = d3;
        s.z0_prime = cfg.z0_is_fraction ? cfg.z0_value * d3 : cfg.z0_value;
        return find_guided_roots(s, omega, Polarization::p).size();
    };
    double lo = 2.5, hi = 0.0;
    for (double d3 = 2.6; d3 < 6.0; d3 += 0.1) {
        if (count(d3) >= 2) {
            hi = d3;
            break;
        }
        lo = d3;
    }
    if (hi == 0.0)
        throw std::runtime_error("first_peak_thickness: no pair birth found");
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (count(mid) >= 2 ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

ScanConfig figure_preset_config(const std::string& name)
{
    ScanConfig cfg = base_config();
    if (name == "fig2") {
        cfg.layer3 = fig2_middle(1e-10);
        cfg.omega = 1.09;
        cfg.z0_is_fraction = true;
        cfg.z0_value = 0.25;
        cfg.sweep = SweepSpec{SweepAxis::d3_prime, 0.1, 10.0, 500};
    } else if (name == "fig3") {
        cfg.layer3 = fig2_middle(1e-10);
        cfg.omega = 1.09;
        cfg.z0_is_fraction = true;
        cfg.z0_value = 0.25;
        cfg.sweep = SweepSpec{SweepAxis::d3_prime, 0.02, 1.0, 400};
    } else if (name == "fig4") {
        cfg.layer3 = fig2_middle(1e-10);
        cfg.omega = 1.09;
        cfg.z0_is_fraction = true;
        cfg.z0_value = 0.25;
        cfg.d3_prime = 3.0; // replaced by the computed first-peak thickness
        cfg.method.residue_switch_gamma = 0.0; // absorption study: always quadrature
    } else if (name == "fig5") {
        cfg.layer3 = fig5_middle(1e-3);
        cfg.omega = 1.08;
        cfg.z0_is_fraction = true;
        cfg.z0_value = 0.5;
        cfg.sweep = SweepSpec{SweepAxis::d3_prime, 0.1, 10.0, 300};
    } else if (name == "fig6") {
        cfg.layer3 = fig5_middle(1e-3);
        cfg.omega = 1.08;
        cfg.z0_is_fraction = true;
        cfg.z0_value = 0.5;
        cfg.sweep = SweepSpec{SweepAxis::d3_prime, 0.05, 2.0, 300};
    } else if (name == "fig7a") {
        cfg.layer3 = MaterialModel::make_drude_lorentz(1.25, 1.0, 1e-10, 1.189, 1.0, 1e-10);
        cfg.omega = 1.09;
        cfg.z0_is_fraction = true;
        cfg.z0_value = 0.5;
        cfg.sweep = SweepSpec{SweepAxis::d3_prime, 0.1, 10.0, 2000};
    } else if (name == "fig7b") {
        cfg.layer3 = fig5_middle(1e-3);
        cfg.omega = 1.08;
        cfg.z0_is_fraction = true;
        cfg.z0_value = 0.5;
        cfg.sweep = SweepSpec{SweepAxis::d3_prime, 0.1, 10.0, 600};
    } else {
        throw std::invalid_argument("unknown figure preset: " + name);
    }
    return cfg;
}

json figure_preset_notes(const std::string& name)
{
    json notes;
    if (name == "fig2" || name == "fig3" || name == "fig4" || name == "fig7a") {
        notes["parameterization"] =
            "omega_pe = omega_pm = 1.25 yields eps3(1.09) ~= -1.99 + 1.73e-9i, the value "
            "these scans target; an alternative with omega_pe = omega_pm = 1.32 "
            "(eps3(1.09) ~= -2.95) is retained here for reference";
        notes["alternative"] = {{"omega_pe", 1.32}, {"omega_pm", 1.32}};
    }
    if (name == "fig7a")
        notes["parameterization_mu"] = "omega_pm = 1.189 yields mu3(1.09) ~= -1.20 + 1.27e-9i";
    if (name == "fig5" || name == "fig6" || name == "fig7b")
        notes["parameterization"] =
            "omega_pe = 1.25, omega_pm = 1.189, gamma = 1e-3: eps3(1.08) ~= -2.38 + 2.19e-2i, "
            "mu3(1.08) ~= -1.48 + 1.61e-2i";
    return notes;
}

FigureResult run_figure_preset(const std::string& name, int jobs)
{
    FigureResult fig;
    fig.config = figure_preset_config(name);
    fig.config.jobs = jobs;

    if (name == "fig4") {
        ScanConfig cfg = fig.config;
        // thickness slightly past the pair birth so both roots exist at the
        // nominal frequency; the frequency sweep then passes through the
        // enhancement resonance
        const double d3_star = first_peak_thickness(cfg, cfg.omega) + 0.005;
        cfg.d3_prime = d3_star;
        fig.config = cfg;

        const GreenIntegrator gi(cfg.method);
        auto guided_rate_at = [&](double gamma, double omega) {
            LayerStack s = cfg.materialize(0);
            s.layer3 = fig2_middle(gamma);
            s.d3_prime = d3_star;
            s.z0_prime = cfg.z0_value * d3_star;
            return 0.5 * gi.integrate_class(s, omega, ModeRegion::guided).total();
        };

        json peaks = json::array();
        std::string csv = "gamma,omega,Gg\n";
        const std::vector<double> gammas{1e-10, 1e-8};
        std::vector<double> peak_vals;
        for (double g : gammas) {
            for (double w : linspace(1.0885, 1.0915, 61))
                csv += format_double(g) + "," + format_double(w) + "," +
                       format_double(guided_rate_at(g, w)) + "\n";
            const double w_peak = golden_max(
                [&](double w) { return guided_rate_at(g, w); }, 1.09 - 5e-4, 1.09 + 5e-4, 64);
            const double peak = guided_rate_at(g, w_peak);
            // Gg_peak_figure_units: the reference amplitudes this preset
            // targets are labeled in units half as large (free-space
            // population rate); both match in that unit.
            peaks.push_back({{"gamma", g},
                             {"omega_peak", w_peak},
                             {"Gg_peak", peak},
                             {"Gg_peak_figure_units", 0.5 * peak}});
            peak_vals.push_back(peak);
        }
        fig.scan.csv = csv;
        fig.scan.sidecar["config"] = config_to_json(cfg);
        fig.scan.sidecar["config_hash"] = config_hash(config_to_json(cfg));
        fig.summary["d3_star"] = d3_star;
        fig.summary["peaks"] = peaks;
        fig.summary["peak_ratio"] = peak_vals[0] / peak_vals[1];
        fig.summary["notes"] = figure_preset_notes(name);
        return fig;
    }

    fig.scan = run_scan(fig.config);
    fig.summary["notes"] = figure_preset_notes(name);

    if (name == "fig3") {
        const LayerStack s = fig.config.materialize(1.0);
        fig.summary["surface_cutoff_d3max"] = surface_cutoff_thickness(s, fig.config.omega);
    }
    if (name == "fig7a" || name == "fig7b") {
        const GreenIntegrator gi(fig.config.method);
        auto kappa_at = [&](double d3) {
            const LayerStack s = fig.config.materialize(d3);
            return assemble(gi.total_breakdown(s, fig.config.omega)).kappa;
        };
        double kmax = -2, kmin = 2, arg_max = 0, arg_min = 0;
        for (std::size_t i = 0; i < fig.scan.rows.size(); ++i) {
            const double kp = fig.scan.rows[i].kappa;
            if (kp > kmax) {
                kmax = kp;
                arg_max = fig.scan.axis_values[i];
            }
            if (kp < kmin) {
                kmin = kp;
                arg_min = fig.scan.axis_values[i];
            }
        }
        const double step = (fig.config.sweep->hi - fig.config.sweep->lo) /
                            (fig.config.sweep->points - 1);
        const double d_hi = golden_max(kappa_at, std::max(arg_max - 2 * step, 1e-3),
                                       arg_max + 2 * step, 40);
        const double d_lo = golden_max([&](double d) { return -kappa_at(d); },
                                       std::max(arg_min - 2 * step, 1e-3),
                                       arg_min + 2 * step, 40);
        fig.summary["kappa_max"] = std::max(kmax, kappa_at(d_hi));
        fig.summary["kappa_min"] = std::min(kmin, kappa_at(d_lo));
    }
    return fig;
}

void write_figure_outputs(const FigureResult& fig, const std::string& out_dir,
                          const std::string& name)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        json cfg = config_to_json(fig.config);
        cfg["notes"] = figure_preset_notes(name);
        std::ofstream f(fs::path(out_dir) / (name + "_config.json"));
        f << cfg.dump(2) << "\n";
    }
    {
        std::ofstream f(fs::path(out_dir) / (name + "_data.csv"));
        f << fig.scan.csv;
    }
    {
        json s = fig.summary;
        s["sidecar"] = fig.scan.sidecar;
        std::ofstream f(fs::path(out_dir) / (name + "_summary.json"));
        f << s.dump(2) << "\n";
    }
}

} // namespace nriwg
