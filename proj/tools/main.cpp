#include "nriwg/dynamics.hpp"
#include "nriwg/scan.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace nriwg;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_tolerance = 3;

json load_json(const std::string& path, std::string& err)
{
    std::ifstream f(path);
    if (!f) {
        err = "cannot open " + path;
        return {};
    }
    try {
        return json::parse(f);
    } catch (const std::exception& e) {
        err = e.what();
        return {};
    }
}

int with_config(const std::string& path, const std::function<int(const ScanConfig&)>& run)
{
    std::string err;
    const json raw = load_json(path, err);
    if (!err.empty()) {
        std::cerr << "config error: " << err << "\n";
        return exit_config;
    }
    ConfigParse parsed = validate_config(raw);
    if (!parsed.config) {
        for (const auto& e : parsed.errors)
            std::cerr << "config error: " << e << "\n";
        return exit_config;
    }
    return run(*parsed.config);
}

void write_or_print(const std::string& out, const std::string& content)
{
    if (out.empty()) {
        std::cout << content;
    } else {
        std::ofstream f(out);
        f << content;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spontaneous-emission rates and interference in three-layer "
                 "waveguides with a negative-index middle layer"};
    app.require_subcommand(1);

    std::string config_path, out_path, preset;
    int jobs = 1;

    auto* cmd_materials = app.add_subcommand("materials", "Evaluate eps, mu, eta per layer");
    cmd_materials->add_option("--config", config_path)->required();
    cmd_materials->add_option("--out", out_path);

    double k_value = 0.5;
    std::string pol_name = "p";
    auto* cmd_em = app.add_subcommand("em-eval", "Print kernel quantities at one (omega, k)");
    cmd_em->add_option("--config", config_path)->required();
    cmd_em->add_option("--k", k_value)->required();
    cmd_em->add_option("--pol", pol_name)->check(CLI::IsMember({"p", "s", "both"}));
    cmd_em->add_option("--out", out_path);

    auto* cmd_modes = app.add_subcommand("modes", "Guided and surface mode table (CSV)");
    cmd_modes->add_option("--config", config_path)->required();
    cmd_modes->add_option("--out", out_path);

    double kmin = 0, kmax = 0;
    int kpoints = 400;
    auto* cmd_density = app.add_subcommand("density", "Rate density over a k grid (CSV)");
    cmd_density->add_option("--config", config_path)->required();
    cmd_density->add_option("--kmin", kmin);
    cmd_density->add_option("--kmax", kmax);
    cmd_density->add_option("--points", kpoints);
    cmd_density->add_option("--out", out_path);

    auto* cmd_rates = app.add_subcommand("rates", "Rate breakdown at the base point (JSON)");
    cmd_rates->add_option("--config", config_path)->required();
    cmd_rates->add_option("--out", out_path);

    auto* cmd_scan = app.add_subcommand("scan", "Run a sweep, emit CSV + JSON sidecar");
    cmd_scan->add_option("--config", config_path)->required();
    cmd_scan->add_option("--out", out_path)->required();
    cmd_scan->add_option("--jobs", jobs);

    std::string fig_out = ".";
    auto* cmd_figure = app.add_subcommand("figure", "Run a named preset scan");
    cmd_figure->add_option("--preset", preset)
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig6", "fig7a", "fig7b"}));
    cmd_figure->add_option("--out", fig_out);
    cmd_figure->add_option("--jobs", jobs);

    double g1 = 1.0, g2 = 1.0, kappa = 0.0, t_end = 10.0, dt = 0.005;
    std::string rho0_name = "1";
    int stride = 1;
    auto* cmd_dyn = app.add_subcommand("dynamics", "Integrate the master equation (CSV)");
    cmd_dyn->add_option("--gamma1", g1);
    cmd_dyn->add_option("--gamma2", g2);
    cmd_dyn->add_option("--kappa", kappa);
    cmd_dyn->add_option("--rho0", rho0_name)->check(CLI::IsMember({"1", "2", "sym", "antisym"}));
    cmd_dyn->add_option("--t-end", t_end);
    cmd_dyn->add_option("--dt", dt);
    cmd_dyn->add_option("--sample-every", stride);
    cmd_dyn->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_materials->parsed()) {
            return with_config(config_path, [&](const ScanConfig& cfg) {
                const LayerStack s = cfg.materialize(cfg.sweep ? cfg.sweep->lo : 0.0);
                json j;
                int idx = 1;
                for (const MaterialModel* m : {&s.layer1, &s.layer2, &s.layer3}) {
                    json lj;
                    const cplx e = permittivity(*m, cfg.omega);
                    const cplx u = permeability(*m, cfg.omega);
                    lj["eps"] = {e.real(), e.imag()};
                    lj["mu"] = {u.real(), u.imag()};
                    lj["eta"] = {(e * u).real(), (e * u).imag()};
                    j["layer" + std::to_string(idx++)] = lj;
                }
                const StackReport rep = validate_stack(s, cfg.omega);
                j["stack_ok"] = rep.ok;
                j["violations"] = rep.violations;
                write_or_print(out_path, j.dump(2) + "\n");
                return exit_ok;
            });
        }
        if (cmd_em->parsed()) {
            return with_config(config_path, [&](const ScanConfig& cfg) {
                const LayerStack s = cfg.materialize(cfg.sweep ? cfg.sweep->lo : 0.0);
                write_or_print(out_path, em_eval_json(s, cfg.omega, k_value).dump(2) + "\n");
                return exit_ok;
            });
        }
        if (cmd_modes->parsed()) {
            return with_config(config_path, [&](const ScanConfig& cfg) {
                const LayerStack s = cfg.materialize(cfg.sweep ? cfg.sweep->lo : 0.0);
                std::string csv = "pol,class,m,k,residue_x,residue_z\n";
                for (Polarization q : {Polarization::p, Polarization::s}) {
                    auto emit = [&](const std::vector<ModeRoot>& roots) {
                        for (const ModeRoot& r : roots) {
                            csv += std::string(q == Polarization::p ? "p" : "s") + ",";
                            csv += r.cls == ModeClass::guided ? "guided"
                                   : r.cls == ModeClass::surface_near ? "surface_near"
                                                                      : "surface_far";
                            csv += "," + std::to_string(r.m) + "," + format_double(r.k) + "," +
                                   format_double(r.residue_x) + "," +
                                   format_double(r.residue_z) + "\n";
                        }
                    };
                    emit(find_guided_roots(s, cfg.omega, q));
                    emit(find_surface_roots(s, cfg.omega, q));
                }
                write_or_print(out_path, csv);
                return exit_ok;
            });
        }
        if (cmd_density->parsed()) {
            return with_config(config_path, [&](const ScanConfig& cfg) {
                const LayerStack s = cfg.materialize(cfg.sweep ? cfg.sweep->lo : 0.0);
                const GreenIntegrator gi(cfg.method);
                const RegionSplit split = region_split(s, cfg.omega);
                const double lo = kmin > 0 ? kmin : 1e-3;
                const double hi = kmax > 0 ? kmax : split.evanescent_hi;
                std::string csv = "k,dGx_p,dGx_s,dGz_p\n";
                for (int i = 0; i < kpoints; ++i) {
                    const double k = lo + (hi - lo) * i / (kpoints - 1);
                    const RateDensity d = gi.rate_density(s, cfg.omega, k);
                    csv += format_double(k) + "," + format_double(d.dgamma_x_p) + "," +
                           format_double(d.dgamma_x_s) + "," + format_double(d.dgamma_z_p) + "\n";
                }
                write_or_print(out_path, csv);
                return exit_ok;
            });
        }
        if (cmd_rates->parsed()) {
            return with_config(config_path, [&](const ScanConfig& cfg) {
                const LayerStack s = cfg.materialize(cfg.sweep ? cfg.sweep->lo : 0.0);
                const GreenIntegrator gi(cfg.method);
                const RateBreakdown bd = assemble(gi.total_breakdown(s, cfg.omega));
                write_or_print(out_path, breakdown_to_json(bd).dump(2) + "\n");
                return bd.converged ? exit_ok : exit_tolerance;
            });
        }
        if (cmd_scan->parsed()) {
            return with_config(config_path, [&](const ScanConfig& cfg) {
                ScanConfig c = cfg;
                if (cmd_scan->count("--jobs"))
                    c.jobs = jobs;
                const ScanResult res = run_scan(c);
                std::ofstream f(out_path);
                f << res.csv;
                std::ofstream side(out_path + ".meta.json");
                side << res.sidecar.dump(2) << "\n";
                if (res.tolerance_failures > 0) {
                    std::cerr << res.tolerance_failures
                              << " sweep point(s) missed the tolerance\n";
                    return exit_tolerance;
                }
                return exit_ok;
            });
        }
        if (cmd_figure->parsed()) {
            const FigureResult fig = run_figure_preset(preset, jobs);
            write_figure_outputs(fig, fig_out, preset);
            if (fig.scan.tolerance_failures > 0) {
                std::cerr << fig.scan.tolerance_failures
                          << " sweep point(s) missed the tolerance\n";
                return exit_tolerance;
            }
            return exit_ok;
        }
        if (cmd_dyn->parsed()) {
            SGCParams p{g1, g2, kappa, kappa};
            Mat3 rho0;
            if (rho0_name == "1")
                rho0 = Mat3::projector(0);
            else if (rho0_name == "2")
                rho0 = Mat3::projector(1);
            else {
                const double s = rho0_name == "sym" ? 1.0 : -1.0;
                rho0 = Mat3::pure_state({1.0 / std::sqrt(2.0), s / std::sqrt(2.0), 0.0});
            }
            EvolveOptions opt;
            opt.sample_stride = std::max(stride, 1);
            const Trajectory traj = evolve(rho0, p, t_end, dt, opt);
            std::string csv = "t,rho11,rho22,rho33,re_rho12,im_rho12\n";
            for (std::size_t i = 0; i < traj.t.size(); ++i) {
                const Mat3& r = traj.rho[i];
                csv += format_double(traj.t[i]) + "," + format_double(r(0, 0).real()) + "," +
                       format_double(r(1, 1).real()) + "," + format_double(r(2, 2).real()) +
                       "," + format_double(r(0, 1).real()) + "," +
                       format_double(r(0, 1).imag()) + "\n";
            }
            write_or_print(out_path, csv);
            return traj.halving_converged ? exit_ok : exit_tolerance;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_tolerance;
    }
    return exit_ok;
}
