#pragma once

#include <string>

#include "qleak/distribution.hpp"
#include "qleak/embedding.hpp"

namespace qleak::io {

/// Parses a distribution document: {"x_alphabet": [...], "y_alphabet": [...],
/// "probs": [[...], ...]} where each entry is a number or an exact fraction
/// string "a/b". Errors carry the line of the offending construct.
JointDistribution load_distribution(const std::string& text);
JointDistribution load_distribution_file(const std::string& path);

/// Parses a phase document: {"entries": [{"x": ..., "y": ..., "theta": ...}]}.
/// Pairs outside the support of d are rejected; support pairs without an
/// entry get phase zero.
PhaseFunction load_phases(const std::string& text, const JointDistribution& d);
PhaseFunction load_phases_file(const std::string& path, const JointDistribution& d);

std::string save_distribution(const JointDistribution& d);

} // namespace qleak::io
