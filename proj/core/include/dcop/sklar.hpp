#pragma once

#include <utility>
#include <vector>

#include "dcop/copula.hpp"
#include "dcop/subcopula.hpp"

namespace dcop {

/// Right-continuous step CDF with finitely many jumps.
///
/// F(y) = cum_probs[j] for jump_points[j] <= y < jump_points[j+1]; F is 0
/// below the first jump and 1 from the last one on. Infinite arguments are
/// accepted: F(-inf) = 0 and F(+inf) = 1.
class FiniteCDF {
public:
    FiniteCDF(std::vector<double> jump_points, std::vector<Rational> cum_probs);

    [[nodiscard]] const std::vector<double>& jump_points() const { return jump_points_; }
    [[nodiscard]] const std::vector<Rational>& cum_probs() const { return cum_probs_; }
    [[nodiscard]] Rational operator()(double y) const;

    /// Every cumulative probability is a multiple of 1/M.
    [[nodiscard]] bool range_within(int order) const;

    friend bool operator==(const FiniteCDF&, const FiniteCDF&) = default;

private:
    std::vector<double> jump_points_;
    std::vector<Rational> cum_probs_;
};

/// Discrete joint law with masses on finitely many points, each mass a
/// positive multiple of 1/M, summing to 1. Stored canonically: support
/// sorted lexicographically, duplicates merged.
class FiniteJointDistribution {
public:
    FiniteJointDistribution(int order, std::vector<std::vector<double>> support,
                            std::vector<Rational> masses);

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] int dimension() const { return dimension_; }
    [[nodiscard]] const std::vector<std::vector<double>>& support() const { return support_; }
    [[nodiscard]] const std::vector<Rational>& masses() const { return masses_; }

    /// H(y) = total mass of support points <= y componentwise.
    [[nodiscard]] Rational cdf(const std::vector<double>& y) const;

    friend bool operator==(const FiniteJointDistribution&, const FiniteJointDistribution&) = default;

private:
    int order_ = 0;
    int dimension_ = 0;
    std::vector<std::vector<double>> support_;
    std::vector<Rational> masses_;
};

/// Joint law with CDF H(y) = D(F_1(y_1), ..., F_L(y_L)). Every margin must
/// have range in I_M for the copula's M (DimensionError otherwise).
FiniteJointDistribution compose(const DiscreteCopula& copula, const std::vector<FiniteCDF>& margins);

/// Marginal CDFs of H.
std::vector<FiniteCDF> margins(const FiniteJointDistribution& joint);

/// D*(i/M) = H(y) with F_l(y_l) = i_l/M, on grids J^(l) = Ran(F_l).
DiscreteSubcopula subcopula_of(const FiniteJointDistribution& joint);

/// (extend(subcopula_of(H)), margins(H)). Unique when every Ran(F_l) = I_M.
std::pair<DiscreteCopula, std::vector<FiniteCDF>> decompose(const FiniteJointDistribution& joint);

/// A tie-free sample as the uniform law with mass 1/M per point.
FiniteJointDistribution uniform_joint(const std::vector<std::vector<double>>& points);

}  // namespace dcop
