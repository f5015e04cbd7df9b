#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "semiwave/characteristic.hpp"

namespace semiwave {

enum class SpeedSide { Plus, Minus, Both };

struct CriticalSpeeds {
  double c_minus = -kInf;
  double c_plus = kInf;
  std::optional<double> tangent_lambda_plus;   // double root at c_plus, > 0
  std::optional<double> tangent_lambda_minus;  // double root at c_minus, < 0
  int iterations_plus = 0;
  int iterations_minus = 0;
  double residual_psi_plus = 0.0;
  double residual_dpsi_plus = 0.0;
  double residual_psi_minus = 0.0;
  double residual_dpsi_minus = 0.0;
  std::vector<std::string> method_log;
};

using CharFamily = std::function<CharacteristicFn(double /*c*/)>;

// c_plus = infimum of c whose characteristic has a positive real root, found
// by exponential bracketing, bisection to 1e-8, and damped 2-variable Newton
// on the tangency system {psi = 0, psi_z = 0}. The minus side runs the same
// machinery on the reflected problem (psi_refl(z, c) = psi(-z, -c)).
CriticalSpeeds critical_speeds(const RDModel& m, SpeedSide side);
CriticalSpeeds critical_speeds(const LatticeModel& m, SpeedSide side);

// Plus-side search over an arbitrary family; strip must not depend on c.
// Returns (c_plus, tangent lambda, iterations, residuals) into out.
void critical_speed_plus(const CharFamily& fam, const Strip& strip, CriticalSpeeds& out);

// The root nearer zero at speed c (leftmost positive for c >= c_plus, the
// negative root nearer zero for c <= c_minus). Throws NoRoot in the gap.
double lambda_leftmost(const RDModel& m, double c);
double lambda_leftmost(const LatticeModel& m, double c);

}  // namespace semiwave
