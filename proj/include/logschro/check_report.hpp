#pragma once

#include <map>
#include <string>

namespace logschro {

/// Outcome of one verification: both sides of the relation, the tolerance
/// it was judged at, and any supporting numbers.
struct CheckReport
{
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double tolerance = 0.0;
  std::map<std::string, double> details;
};

}  // namespace logschro
