#pragma once

#include "nriwg/rates.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace nriwg {

using json = nlohmann::ordered_json;

enum class SweepAxis { d3_prime, z0_prime, omega, gamma_absorption };

struct SweepSpec {
    SweepAxis axis = SweepAxis::d3_prime;
    double lo = 0, hi = 0;
    int points = 2;
};

// One scan description: a stack, an emission frequency, an optional swept
// axis, and the numerical method knobs. When d3' is swept, z0' is normally a
// fraction of d3' (matching the usual z0' = f d3' parameterization); absolute
// z0' is available via "z0_prime": {"absolute": ...}.
struct ScanConfig {
    MaterialModel layer1, layer2, layer3;
    double d3_prime = 1.0;
    double z0_value = 0.5;
    bool z0_is_fraction = true;
    double omega = 1.0;
    std::optional<SweepSpec> sweep;
    IntegratorOptions method;
    int jobs = 1;

    /// Stack at a given value of the swept axis (or the base point).
    LayerStack materialize(double axis_value) const;
    double omega_at(double axis_value) const;
};

struct ConfigParse {
    std::optional<ScanConfig> config;
    std::vector<std::string> errors;
};

/// Parses and validates; all schema and invariant violations are collected,
/// not just the first.
ConfigParse validate_config(const json& raw);

json config_to_json(const ScanConfig& cfg);

json material_to_json(const MaterialModel& m);
MaterialModel material_from_json(const json& j, std::vector<std::string>& errors,
                                 const std::string& where);

/// Kernel quantities at one (omega, k) as JSON: betas, reflection
/// coefficients, D factors, source factors, phases where defined.
json em_eval_json(const LayerStack& s, double omega, double k);

json breakdown_to_json(const RateBreakdown& bd);

/// FNV-1a hash of the canonical config serialization, as hex.
std::string config_hash(const json& j);

std::string format_double(double v);

} // namespace nriwg
