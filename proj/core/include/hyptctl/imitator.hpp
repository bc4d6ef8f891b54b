#pragma once

#include <string>
#include <vector>

#include "hyptctl/reduce.hpp"

namespace hyptctl {

struct ImitatorFiles {
    std::string model_text;     // the .imi content
    std::string property_text;  // the .imiprop content
    std::vector<std::string> notes;
};

/// Renders the reduced product and its stripped until formula in the
/// external solver's model/property text format (v3.4 syntax): one
/// automaton with mangled location names, a clock block, a parameter
/// block, an urgent dispatch location when several initial locations
/// exist, and an EF/EU (or AF/AU, with a notice that the built-in engine
/// cannot check those) synthesis property whose duration bound rides on
/// the never-reset clock __dur.
ImitatorFiles render_imitator(const ReductionArtifacts& artifacts);

/// Writes <outdir>/<base>.imi and <outdir>/<base>.imiprop.
/// Returns the two paths.
std::pair<std::string, std::string> export_imitator(const ReductionArtifacts& artifacts,
                                                    const std::string& outdir,
                                                    const std::string& base);

/// Grammar validators for the emitted formats: empty result means valid.
/// They check structure (var block, automaton block, init block, property
/// shape) and that referenced locations, clocks and parameters are
/// declared.
std::vector<std::string> validate_imi(const std::string& text);
std::vector<std::string> validate_imiprop(const std::string& text);

}  // namespace hyptctl
