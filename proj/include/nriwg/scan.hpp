#pragma once

#include "nriwg/config.hpp"

namespace nriwg {

inline constexpr const char* scan_csv_header =
    "d3_prime,z0_prime,omega,gamma_absorption,"
    "Gr,Gsub,Gg,Gs,Gx,Gz,Gtot,kappa,"
    "Gr_px,Gr_pz,Gr_sx,Gsub_px,Gsub_pz,Gsub_sx,"
    "Gg_px,Gg_pz,Gg_sx,Gs_px,Gs_pz,Gs_sx,error_estimate";

struct ScanResult {
    std::string csv;       // header + one row per sweep point, ascending axis
    json sidecar;          // config echo, hash, methods, tolerance report
    int tolerance_failures = 0;
    std::vector<RateBreakdown> rows;
    std::vector<double> axis_values;
};

/// Runs a scan (or the single base point when no sweep is configured). Rows
/// are computed by a bounded worker pool and assembled in axis order, so the
/// CSV is identical for any parallelism degree.
ScanResult run_scan(const ScanConfig& cfg);

struct FigureResult {
    ScanConfig config;
    ScanResult scan;
    json summary;
};

/// Materializes one of the built-in figure presets (fig2, fig3, fig4, fig5,
/// fig6, fig7a, fig7b) and runs it. fig4 runs a frequency scan at two
/// absorption strengths and reports the refined peak amplitudes in summary.
FigureResult run_figure_preset(const std::string& name, int jobs = 1);

/// Preset configuration only (no computation).
ScanConfig figure_preset_config(const std::string& name);

/// Annotation block stored next to preset configs (parameter provenance).
json figure_preset_notes(const std::string& name);

/// Writes config.json, data.csv and summary.json under out_dir.
void write_figure_outputs(const FigureResult& fig, const std::string& out_dir,
                          const std::string& name);

} // namespace nriwg
