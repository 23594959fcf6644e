#include "qleak/primitives.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace qleak {

namespace {

constexpr char kErasure[] = "⊥"; // ⊥

std::string bits(int value, int r) {
    std::string s(static_cast<std::size_t>(r), '0');
    for (int i = 0; i < r; ++i) {
        if (value & (1 << (r - 1 - i))) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
}

JointDistribution build_rot(int r) {
    int n = 1 << r;
    std::vector<std::string> xs, ys;
    for (int i = 0; i < n; ++i) xs.push_back(bits(i, r));
    ys = xs;
    ys.push_back(kErasure);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n + 1);
    double mass = std::ldexp(1.0, -r - 1);
    for (int x = 0; x < n; ++x) {
        m(x, x) = mass;
        m(x, n) = mass;
    }
    return JointDistribution(std::move(xs), std::move(ys), std::move(m));
}

JointDistribution build_string_ot(int r, double correct_mass, double error_mass) {
    int n = 1 << r;
    std::vector<std::string> xs, ys;
    for (int x0 = 0; x0 < n; ++x0) {
        for (int x1 = 0; x1 < n; ++x1) xs.push_back(bits(x0, r) + "," + bits(x1, r));
    }
    for (int c = 0; c < 2; ++c) {
        for (int y = 0; y < n; ++y) ys.push_back(bits(c, 1) + "," + bits(y, r));
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n * n, 2 * n);
    for (int x0 = 0; x0 < n; ++x0) {
        for (int x1 = 0; x1 < n; ++x1) {
            for (int c = 0; c < 2; ++c) {
                int selected = c == 0 ? x0 : x1;
                for (int y = 0; y < n; ++y) {
                    m(x0 * n + x1, c * n + y) = y == selected ? correct_mass : error_mass;
                }
            }
        }
    }
    return JointDistribution(std::move(xs), std::move(ys), std::move(m));
}

JointDistribution build_sand() {
    std::vector<std::string> xs{"0,0", "0,1", "1,0", "1,1"};
    std::vector<std::string> ys = xs;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    for (int x = 0; x < 2; ++x) {
        for (int a = 0; a < 2; ++a) {
            for (int y = 0; y < 2; ++y) {
                for (int b = 0; b < 2; ++b) {
                    if ((x & y) == (a ^ b)) m(x * 2 + a, y * 2 + b) = 0.125;
                }
            }
        }
    }
    return JointDistribution(std::move(xs), std::move(ys), std::move(m));
}

} // namespace

JointDistribution build_primitive(const PrimitiveSpec& spec) {
    switch (spec.kind) {
        case PrimitiveKind::rot:
            if (spec.r < 1 || spec.r > kMaxConstructibleR) {
                throw InvalidSpec("rot requires 1 <= r <= 12");
            }
            return build_rot(spec.r);
        case PrimitiveKind::ot:
            return build_string_ot(1, 0.125, 0.0);
        case PrimitiveKind::ot_string:
            if (spec.r < 1 || spec.r > kMaxConstructibleStringOtR) {
                throw InvalidSpec("ot-string requires 1 <= r <= 4");
            }
            return build_string_ot(spec.r, std::ldexp(1.0, -2 * spec.r - 1), 0.0);
        case PrimitiveKind::sand:
            return build_sand();
        case PrimitiveKind::ot_noisy:
            if (!(spec.p > 0.0 && spec.p < 0.5)) {
                throw InvalidSpec("ot-noisy requires p in (0, 1/2)");
            }
            return build_string_ot(1, (1.0 - spec.p) / 8.0, spec.p / 8.0);
    }
    throw InvalidSpec("unknown primitive kind");
}

double rot_closed_form_leakage(int r) {
    if (r < 1 || r > 60) throw InvalidSpec("closed form requires 1 <= r <= 60");
    double small = std::ldexp(1.0, -r - 1); // 2^-(r+1)
    double big = 0.5 + small;
    double multiplicity = std::ldexp(1.0, r) - 1.0; // 2^r - 1
    double entropy = -big * std::log2(big) + multiplicity * small * (r + 1);
    return entropy - 0.5 * r;
}

OtCurvePoint ot_leakage_curve(double omega) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    omega = std::fmod(omega, kTwoPi);
    if (omega < 0.0) omega += kTwoPi;
    double c = std::cos(omega / 4.0);
    double s = std::sin(omega / 4.0);
    OtCurvePoint point;
    point.eigenvalues = {0.25 * (1.0 + c), 0.25 * (1.0 - c),
                         0.25 * (1.0 + s), 0.25 * (1.0 - s)};
    double entropy =
        1.0 + 0.5 * (binary_entropy(0.5 * (1.0 - c)) + binary_entropy(0.5 * (1.0 - s)));
    point.leakage = entropy - 1.0;
    return point;
}

std::optional<double> otp_lower_bound(double p, bool loose_constant) {
    if (p < 0.0 || p >= 0.5) throw InvalidSpec("otp bound requires p in [0, 1/2)");
    double threshold = 0.5 - 0.5 / std::sqrt(2.0); // sin^2(pi/8)
    if (p > threshold) return std::nullopt;
    double gap = 0.5 - p - std::sqrt(p * (1.0 - p));
    double divisor = (loose_constant ? 32.0 : 8.0) * std::log(2.0);
    return gap * gap / divisor;
}

JointDistribution simulate_classical_otp_quarter() {
    // Alice sends one of her two uniform bits, chosen uniformly; Bob picks his
    // selection bit uniformly and outputs the received bit.
    JointDistribution shape = build_primitive({PrimitiveKind::ot_noisy, 0, 0.25});
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(shape.x_size(), shape.y_size());
    for (int x0 = 0; x0 < 2; ++x0) {
        for (int x1 = 0; x1 < 2; ++x1) {
            for (int a = 0; a < 2; ++a) {
                for (int c = 0; c < 2; ++c) {
                    int y = a == 0 ? x0 : x1;
                    m(x0 * 2 + x1, c * 2 + y) += 1.0 / 16.0;
                }
            }
        }
    }
    return JointDistribution(shape.x_alphabet(), shape.y_alphabet(), std::move(m));
}

} // namespace qleak
