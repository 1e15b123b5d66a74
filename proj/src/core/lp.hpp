#pragma once

// Bounded-variable primal simplex: maximize c.x subject to A x = b and
// 0 <= x_j <= u_j (u_j may be infinite). The problem is solved in double
// precision first; the final basis is then refactored in exact rationals and
// the solve continues with Bland's rule until it is provably optimal.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace ggt {

struct LinearProgram {
  std::size_t columns = 0;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;  // sparse A
  std::vector<Rational> rhs;
  std::vector<std::optional<Rational>> upper;  // per column; nullopt = +inf
  std::vector<Rational> objective;             // per column
};

struct LpSolution {
  enum class Status { Optimal, Infeasible, Unbounded, IterationCap } status = Status::Optimal;
  Rational value;
  std::vector<Rational> x;
  std::size_t float_iterations = 0;
  std::size_t exact_iterations = 0;
  bool warm_start = false;  // exact phase started from the floating-point basis
};

std::string status_name(LpSolution::Status s);

LpSolution solve_lp(const LinearProgram& lp, std::size_t iteration_cap = 200000);

}  // namespace ggt
