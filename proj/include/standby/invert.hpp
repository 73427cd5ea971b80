#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "standby/lst.hpp"

namespace standby {

enum class InversionMethod { EulerAbateWhitt, GaverStehfest };
enum class InversionTarget { CDF, Tail };

/// terms: Euler uses 2M+1 evaluations with M = terms; Gaver-Stehfest uses
/// terms stages (even, <= 18 in double precision).
struct InversionSettings {
  InversionMethod method = InversionMethod::EulerAbateWhitt;
  int terms = 25;
  InversionTarget target = InversionTarget::CDF;

  void validate() const;
};

struct InversionPoint {
  double value = 0.0;  // clamped to [0, 1]
  double raw = 0.0;    // before clamping
  bool unstable = false;
};

/// Invert the transform of a probability law at time t. `lst` is the
/// Laplace-Stieltjes transform phi(s); the routine forms phi/s (CDF) or
/// (1 - phi)/s (tail) internally. The result is always on the CDF scale:
/// the Tail target inverts the complementary transform (more accurate deep
/// in the tail) and flips the value back. Euler evaluates complex
/// abscissas, Gaver-Stehfest real ones only.
InversionPoint invert_law_point(
    const std::function<std::complex<double>(std::complex<double>)>& lst,
    double t, const InversionSettings& settings);

/// P(tau_j <= t) by numerical inversion of phi_j. Raw overshoot beyond
/// 1e-4 outside [0,1] raises InversionUnstable.
double invert_cdf(const SystemConfig& config, int j, double t,
                  const InversionSettings& settings);

struct InversionCurve {
  std::vector<double> t;
  std::vector<double> cdf;
  std::vector<std::string> flags;  // per-point: "" | "unstable" | "nonmonotone"
};

/// Pointwise invert_cdf over a strictly increasing grid; adjacent
/// decreases beyond 1e-4 are flagged, never silently reordered.
InversionCurve invert_curve(const SystemConfig& config, int j,
                            const std::vector<double>& t_grid,
                            const InversionSettings& settings);

}  // namespace standby
