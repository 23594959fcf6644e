#pragma once

#include <array>
#include <optional>

#include "qleak/distribution.hpp"

namespace qleak {

enum class PrimitiveKind { rot, ot, ot_string, sand, ot_noisy };

/// Parameters for a built-in randomized primitive. r is required for rot and
/// ot_string; p is required for ot_noisy.
struct PrimitiveSpec {
    PrimitiveKind kind;
    int r = 0;
    double p = 0.0;
};

/// Maximum string length for which states are actually constructed.
constexpr int kMaxConstructibleR = 12;
constexpr int kMaxConstructibleStringOtR = 4;

JointDistribution build_primitive(const PrimitiveSpec& spec);

/// Leakage of any regular ROT^r embedding, from the reduced-state spectrum
/// {1/2 + 2^-(r+1), 2^-(r+1) x (2^r - 1)}. Valid for 1 <= r <= 60.
double rot_closed_form_leakage(int r);

struct OtCurvePoint {
    double leakage;
    std::array<double, 4> eigenvalues; // {1/4 (1 +- cos w/4), 1/4 (1 +- sin w/4)}
};

/// Closed-form leakage of the 1-2-OT embedding family reduced to its single
/// gauge-invariant phase combination.
OtCurvePoint ot_leakage_curve(double omega);

/// Leakage lower bound for noisy OT; empty when p > 1/2 - 1/(2 sqrt 2).
/// The loose_constant flag divides by 32 ln 2 instead of 8 ln 2.
std::optional<double> otp_lower_bound(double p, bool loose_constant = false);

/// Exact output distribution of the two-message classical protocol that
/// realizes noisy OT at p = 1/4.
JointDistribution simulate_classical_otp_quarter();

} // namespace qleak
