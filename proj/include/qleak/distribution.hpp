#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qleak/errors.hpp"

namespace qleak {

enum class Side { alice, bob };

/// Finite joint probability table P_{X,Y} over two labeled alphabets.
/// Entries are non-negative and sum to one within 1e-12; symbols are
/// unique within each alphabet. Immutable after construction.
class JointDistribution {
  public:
    JointDistribution(std::vector<std::string> x_alphabet,
                      std::vector<std::string> y_alphabet,
                      Eigen::MatrixXd probs);

    const std::vector<std::string>& x_alphabet() const { return x_alphabet_; }
    const std::vector<std::string>& y_alphabet() const { return y_alphabet_; }
    const Eigen::MatrixXd& probs() const { return probs_; }

    Eigen::Index x_size() const { return probs_.rows(); }
    Eigen::Index y_size() const { return probs_.cols(); }
    double prob(Eigen::Index x, Eigen::Index y) const { return probs_(x, y); }

    Eigen::VectorXd x_marginal() const { return probs_.rowwise().sum(); }
    Eigen::VectorXd y_marginal() const { return probs_.colwise().sum().transpose(); }

    /// Support pairs (x index, y index) with strictly positive mass, row-major order.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> support() const;

  private:
    std::vector<std::string> x_alphabet_;
    std::vector<std::string> y_alphabet_;
    Eigen::MatrixXd probs_;
};

/// Result of collapsing one side by equality of conditional distributions.
struct DependentPartMap {
    Side source;
    std::map<std::string, int> class_of; // source symbol -> class id
    int class_count = 0;
    JointDistribution quotient; // collapsed side replaced by class symbols "c0", "c1", ...
};

double shannon_entropy(const Eigen::VectorXd& p);

/// Binary entropy h(p) in bits, h(0) = h(1) = 0.
double binary_entropy(double p);

double mutual_information(const JointDistribution& d);

DependentPartMap dependent_part(const JointDistribution& d, Side side);

/// H(X_dep|Y) for side alice, H(Y_dep|X) for side bob, in bits.
double monotone(const JointDistribution& d, Side side);

bool is_trivial(const JointDistribution& d);

/// Splits a symbol into the part that is kept after conditioning and the
/// part the conditioning event constrains.
struct SymbolSplit {
    std::string kept;
    std::string conditioned;
};

using SymbolProjection = std::function<SymbolSplit(const std::string&)>;

/// Projection keeping the whole symbol; its conditioned part is empty.
SymbolProjection keep_all();

JointDistribution condition_on(const JointDistribution& d,
                               const SymbolProjection& x_projection,
                               const SymbolProjection& y_projection,
                               const std::string& x_value,
                               const std::string& y_value);

bool equivalent_up_to_relabeling(const JointDistribution& d1,
                                 const JointDistribution& d2);

} // namespace qleak
