#pragma once

namespace kickent {

/// Linear entropy expected at a smaller effective Planck constant:
/// 1 - hbar_ratio (1 - omega), hbar_ratio = hbar_fine / hbar_coarse in (0, 1].
/// Throws UsageError outside that range or for omega outside [0, 1].
double scaling_predict(double omega, double hbar_ratio);

namespace detail {
/// Same map without domain checks (any positive ratio).
double scaling_map(double omega, double hbar_ratio);
}  // namespace detail

}  // namespace kickent
