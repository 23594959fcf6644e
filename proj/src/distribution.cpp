#include "qleak/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace qleak {

namespace {

constexpr double kNormalizationTol = 1e-12;
constexpr double kVectorNormalizationTol = 1e-9;
constexpr double kGroupingTol = 1e-9; // per-entry equality of conditional rows
constexpr double kTrivialityTol = 1e-9; // bits
constexpr double kRelabelTol = 1e-9;
constexpr int kMaxRelabelAlphabet = 8;

double plogp(double p) {
    return p > 0.0 ? -p * std::log2(p) : 0.0;
}

} // namespace

JointDistribution::JointDistribution(std::vector<std::string> x_alphabet,
                                     std::vector<std::string> y_alphabet,
                                     Eigen::MatrixXd probs)
    : x_alphabet_(std::move(x_alphabet)),
      y_alphabet_(std::move(y_alphabet)),
      probs_(std::move(probs)) {
    if (static_cast<Eigen::Index>(x_alphabet_.size()) != probs_.rows() ||
        static_cast<Eigen::Index>(y_alphabet_.size()) != probs_.cols()) {
        throw NonDistribution("alphabet sizes do not match probability matrix dimensions");
    }
    if (probs_.rows() == 0 || probs_.cols() == 0) {
        throw NonDistribution("empty alphabet");
    }
    if ((probs_.array() < 0.0).any()) {
        throw NonDistribution("negative probability entry");
    }
    double total = probs_.sum();
    if (std::abs(total - 1.0) > kNormalizationTol) {
        throw NonDistribution("probabilities sum to " + std::to_string(total));
    }
    std::set<std::string> seen_x(x_alphabet_.begin(), x_alphabet_.end());
    std::set<std::string> seen_y(y_alphabet_.begin(), y_alphabet_.end());
    if (seen_x.size() != x_alphabet_.size() || seen_y.size() != y_alphabet_.size()) {
        throw NonDistribution("duplicate alphabet symbol");
    }
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> JointDistribution::support() const {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    for (Eigen::Index x = 0; x < probs_.rows(); ++x) {
        for (Eigen::Index y = 0; y < probs_.cols(); ++y) {
            if (probs_(x, y) > 0.0) out.emplace_back(x, y);
        }
    }
    return out;
}

double shannon_entropy(const Eigen::VectorXd& p) {
    if ((p.array() < -kVectorNormalizationTol).any()) {
        throw NonDistribution("negative entry in probability vector");
    }
    if (std::abs(p.sum() - 1.0) > kVectorNormalizationTol) {
        throw NonDistribution("probability vector sums to " + std::to_string(p.sum()));
    }
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) h += plogp(std::max(p(i), 0.0));
    return h;
}

double binary_entropy(double p) {
    return plogp(p) + plogp(1.0 - p);
}

double mutual_information(const JointDistribution& d) {
    double hx = shannon_entropy(d.x_marginal());
    double hy = shannon_entropy(d.y_marginal());
    double hxy = 0.0;
    for (Eigen::Index x = 0; x < d.x_size(); ++x) {
        for (Eigen::Index y = 0; y < d.y_size(); ++y) hxy += plogp(d.prob(x, y));
    }
    return hx + hy - hxy;
}

DependentPartMap dependent_part(const JointDistribution& d, Side side) {
    // Work on rows of the matrix whose rows index the collapsed side.
    Eigen::MatrixXd m = side == Side::alice ? d.probs() : d.probs().transpose();
    const auto& source_alphabet = side == Side::alice ? d.x_alphabet() : d.y_alphabet();

    // Zero-marginal symbols are dropped: their conditionals are undefined.
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (m.row(i).sum() > 0.0) kept.push_back(i);
    }
    if (kept.empty()) throw NonDistribution("no source symbol with positive marginal");

    // Group symbols whose conditional rows agree entry-wise.
    std::map<std::string, int> class_of;
    std::vector<Eigen::VectorXd> class_conditional;
    std::vector<Eigen::VectorXd> class_row; // accumulated joint mass per class
    for (Eigen::Index i : kept) {
        Eigen::VectorXd cond = m.row(i).transpose() / m.row(i).sum();
        int cls = -1;
        for (std::size_t c = 0; c < class_conditional.size(); ++c) {
            if (((cond - class_conditional[c]).array().abs() <= kGroupingTol).all()) {
                cls = static_cast<int>(c);
                break;
            }
        }
        if (cls < 0) {
            cls = static_cast<int>(class_conditional.size());
            class_conditional.push_back(cond);
            class_row.push_back(Eigen::VectorXd::Zero(m.cols()));
        }
        class_of[source_alphabet[static_cast<std::size_t>(i)]] = cls;
        class_row[static_cast<std::size_t>(cls)] += m.row(i).transpose();
    }

    int class_count = static_cast<int>(class_row.size());
    Eigen::MatrixXd q(class_count, m.cols());
    std::vector<std::string> class_symbols;
    for (int c = 0; c < class_count; ++c) {
        q.row(c) = class_row[static_cast<std::size_t>(c)].transpose();
        class_symbols.push_back("c" + std::to_string(c));
    }
    // Guard against accumulated float noise in the total mass.
    q /= q.sum();

    JointDistribution quotient =
        side == Side::alice
            ? JointDistribution(class_symbols, d.y_alphabet(), q)
            : JointDistribution(d.x_alphabet(), class_symbols, q.transpose());
    return DependentPartMap{side, std::move(class_of), class_count, std::move(quotient)};
}

double monotone(const JointDistribution& d, Side side) {
    DependentPartMap dp = dependent_part(d, side);
    const JointDistribution& q = dp.quotient;
    // H(collapsed side | other side) on the quotient.
    double hxy = 0.0;
    for (Eigen::Index x = 0; x < q.x_size(); ++x) {
        for (Eigen::Index y = 0; y < q.y_size(); ++y) hxy += plogp(q.prob(x, y));
    }
    double h_other = shannon_entropy(side == Side::alice ? q.y_marginal() : q.x_marginal());
    return std::max(hxy - h_other, 0.0);
}

bool is_trivial(const JointDistribution& d) {
    bool alice = monotone(d, Side::alice) <= kTrivialityTol;
    bool bob = monotone(d, Side::bob) <= kTrivialityTol;
    if (alice != bob) {
        throw Error("triviality conditions for the two sides disagree");
    }
    return alice;
}

SymbolProjection keep_all() {
    return [](const std::string& s) { return SymbolSplit{s, std::string()}; };
}

JointDistribution condition_on(const JointDistribution& d,
                               const SymbolProjection& x_projection,
                               const SymbolProjection& y_projection,
                               const std::string& x_value,
                               const std::string& y_value) {
    std::vector<std::string> x_kept, y_kept;
    std::map<std::string, Eigen::Index> x_index, y_index;
    std::vector<SymbolSplit> x_split, y_split;
    for (const auto& s : d.x_alphabet()) x_split.push_back(x_projection(s));
    for (const auto& s : d.y_alphabet()) y_split.push_back(y_projection(s));
    for (const auto& sp : x_split) {
        if (sp.conditioned == x_value && !x_index.count(sp.kept)) {
            x_index[sp.kept] = static_cast<Eigen::Index>(x_kept.size());
            x_kept.push_back(sp.kept);
        }
    }
    for (const auto& sp : y_split) {
        if (sp.conditioned == y_value && !y_index.count(sp.kept)) {
            y_index[sp.kept] = static_cast<Eigen::Index>(y_kept.size());
            y_kept.push_back(sp.kept);
        }
    }
    if (x_kept.empty() || y_kept.empty()) {
        throw ZeroProbabilityEvent("conditioning event matches no symbol");
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x_kept.size()),
                                              static_cast<Eigen::Index>(y_kept.size()));
    for (Eigen::Index x = 0; x < d.x_size(); ++x) {
        if (x_split[static_cast<std::size_t>(x)].conditioned != x_value) continue;
        for (Eigen::Index y = 0; y < d.y_size(); ++y) {
            if (y_split[static_cast<std::size_t>(y)].conditioned != y_value) continue;
            m(x_index[x_split[static_cast<std::size_t>(x)].kept],
              y_index[y_split[static_cast<std::size_t>(y)].kept]) += d.prob(x, y);
        }
    }
    double mass = m.sum();
    if (mass <= 0.0) throw ZeroProbabilityEvent("conditioning event has probability zero");
    return JointDistribution(std::move(x_kept), std::move(y_kept), m / mass);
}

namespace {

bool rows_match(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return ((a - b).array().abs() <= kRelabelTol).all();
}

// Can the columns of a be permuted to equal b? Greedy matching with
// backtracking; alphabets are capped so this stays tiny.
bool columns_matchable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                       std::vector<bool>& used, Eigen::Index col) {
    if (col == b.cols()) return true;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        if (((a.col(j) - b.col(col)).array().abs() <= kRelabelTol).all()) {
            used[static_cast<std::size_t>(j)] = true;
            if (columns_matchable(a, b, used, col + 1)) return true;
            used[static_cast<std::size_t>(j)] = false;
        }
    }
    return false;
}

bool search_row_permutation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            std::vector<Eigen::Index>& perm, std::vector<bool>& used,
                            Eigen::Index row) {
    if (row == b.rows()) {
        Eigen::MatrixXd pa(a.rows(), a.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i) pa.row(i) = a.row(perm[static_cast<std::size_t>(i)]);
        std::vector<bool> col_used(static_cast<std::size_t>(a.cols()), false);
        return columns_matchable(pa, b, col_used, 0);
    }
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        // Prune: row multisets must agree.
        Eigen::VectorXd sa = a.row(i).transpose();
        Eigen::VectorXd sb = b.row(row).transpose();
        std::sort(sa.data(), sa.data() + sa.size());
        std::sort(sb.data(), sb.data() + sb.size());
        if (!(((sa - sb).array().abs() <= kRelabelTol).all())) continue;
        used[static_cast<std::size_t>(i)] = true;
        perm[static_cast<std::size_t>(row)] = i;
        if (search_row_permutation(a, b, perm, used, row + 1)) return true;
        used[static_cast<std::size_t>(i)] = false;
    }
    return false;
}

Eigen::MatrixXd canonical_form(Eigen::MatrixXd m) {
    auto lex_less = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (a(i) < b(i) - kRelabelTol) return true;
            if (a(i) > b(i) + kRelabelTol) return false;
        }
        return false;
    };
    for (int pass = 0; pass < 4; ++pass) {
        std::vector<Eigen::VectorXd> rows;
        for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(m.row(i).transpose());
        std::stable_sort(rows.begin(), rows.end(), lex_less);
        for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) = rows[static_cast<std::size_t>(i)].transpose();
        std::vector<Eigen::VectorXd> cols;
        for (Eigen::Index j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
        std::stable_sort(cols.begin(), cols.end(), lex_less);
        for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) = cols[static_cast<std::size_t>(j)];
    }
    return m;
}

} // namespace

bool equivalent_up_to_relabeling(const JointDistribution& d1,
                                 const JointDistribution& d2) {
    if (d1.x_size() != d2.x_size() || d1.y_size() != d2.y_size()) return false;
    if (d1.x_size() > kMaxRelabelAlphabet || d1.y_size() > kMaxRelabelAlphabet) {
        throw AlphabetTooLarge("relabeling search is capped at alphabets of size 8");
    }
    // Canonical-form comparison decides the common case; ties in the sort can
    // misorder near-equal rows, so a mismatch still falls through to the
    // exhaustive search before rejecting.
    if (rows_match(canonical_form(d1.probs()), canonical_form(d2.probs()))) return true;
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(d1.x_size()));
    std::vector<bool> used(static_cast<std::size_t>(d1.x_size()), false);
    return search_row_permutation(d1.probs(), d2.probs(), perm, used, 0);
}

} // namespace qleak
