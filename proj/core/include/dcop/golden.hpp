#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dcop/copula.hpp"
#include "dcop/sklar.hpp"
#include "dcop/subcopula.hpp"

/// Reference objects on I_3^3 used by the tests and by `dcop demo`.
namespace dcop::golden {

/// Three-dimensional discrete copula with values in multiples of 1/12.
DiscreteCopula table1();
/// Its stochastic array, entries in {0, 1/4}.
StochasticArray table2();

/// Joint law of (Y1, Y2, Y3): Y1 uniform on {1,2,3}, Y2 = [Y1 >= 2],
/// Y3 = 1 for odd Y1 and 2 for even Y1.
FiniteJointDistribution example4_joint();
/// The values determined by that joint, on grids {0..3} x {0,1,3} x {0,2,3}.
DiscreteSubcopula example4_subcopula();
/// A second admissible extension of the subcopula, stored densely.
DiscreteCopula example4_reference_extension();

/// Canonical JSON for "table1", "table2" or "example4". The latter is an
/// object labelling the joint, the subcopula, its canonical extension and the
/// reference extension.
/// Throws ParseError for an unknown name.
std::string emit_golden(std::string_view name);

}  // namespace dcop::golden
