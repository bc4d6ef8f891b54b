#pragma once

#include <string>
#include <vector>

#include "hyptctl/formula.hpp"
#include "hyptctl/model.hpp"

namespace hyptctl {

/// The decidable classes our classifier recognizes. Outside of them the
/// pipeline is a semi-algorithm (sound and complete upon termination).
enum class DecidabilityClass {
    NonparametricModelRestrictedFormula,  // non-parametric model, no params in LAST/COUNT
    LUModelReachability,                  // L/U model, non-parametric exists-diamond formula
    LUModelNoInvariants,                  // L/U model without invariants, non-parametric formula
    SingleParametricClockDiscrete,        // one parametric clock, one parameter, discrete time
    SemiAlgorithmOnly,
};

struct FragmentReport {
    // model-side flags
    bool model_is_lu = false;
    std::vector<std::string> lower_bound_params, upper_bound_params;
    bool model_nonparametric = false;
    bool model_has_invariants = false;
    bool model_nonstandard_guards = false;  // clock compared to a general linear term
    int parametric_clocks = 0;

    // formula-side flags
    bool formula_params_in_ext = false;  // parameters inside LAST windows
    bool formula_nonparametric = false;
    bool formula_only_exists_diamond = false;
    bool alternation_free_param_quantifiers = false;
    int max_path_vars = 0;

    DecidabilityClass verdict = DecidabilityClass::SemiAlgorithmOnly;
    bool verdict_assumes_integer_params = false;

    std::string verdict_text() const;
    std::string to_text() const;
};

FragmentReport classify_fragment(const Pta& a, const TopPtr& psi, bool discrete_time = false);

}  // namespace hyptctl
