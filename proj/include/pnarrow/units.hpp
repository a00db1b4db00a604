#pragma once

#include <numbers>

namespace pnarrow {

// Internal frequencies are angular, rad/ns. User-facing frequencies are
// ordinary frequencies in MHz: f[MHz] = Omega / (2 pi) * 1e3.

inline constexpr double kRadPerNsPerMHz = 2.0 * std::numbers::pi * 1e-3;

constexpr double mhz_to_rad_per_ns(double mhz) { return mhz * kRadPerNsPerMHz; }
constexpr double rad_per_ns_to_mhz(double rad_per_ns) { return rad_per_ns / kRadPerNsPerMHz; }

}  // namespace pnarrow
