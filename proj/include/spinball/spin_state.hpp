#pragma once

#include <array>
#include <cstdint>

#include "spinball/rotor.hpp"

namespace spinball {

struct BlochPoint {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2pi)
  Vec3 unit_vector = Vec3::UnitZ();
};

// Base point plus the position along the fiber above it:
//   spinor_from_euler(base.theta, base.phi, fiber_phase, sign) == spinor.
// Shifting delta by 2pi negates the spinor, so [0, 2pi) covers the fiber
// only together with the sign. At the poles phi is 0 and delta carries the
// whole phase of the nonzero amplitude.
struct HopfCoordinates {
  BlochPoint base;
  double fiber_phase = 0.0;  // [0, 2pi)
  int sign = 1;
};

using Rgb = std::array<std::uint8_t, 3>;

struct PanelFrame {
  Rgb pentagon{};
  Rgb hexagon{};
  Complex alpha;
  Complex beta;
};

// Point with unit vector (<sx>, <sy>, <sz>).
BlochPoint bloch_point(const Spinor& s);
BlochPoint bloch_point_from_vector(const Vec3& v);

// ±[e^{-i(delta+phi)/2} cos(theta/2), e^{-i(delta-phi)/2} sin(theta/2)]
Spinor spinor_from_euler(double theta, double phi, double delta, int sign = 1);

HopfCoordinates hopf_coordinates(const Spinor& s);

// Eigenstate of sigma·n with eigenvalue +1, pentagons real and non-negative.
Spinor spinor_along(const Vec3& n);

// HSV wheel: hue = arg z (0 -> red, increasing through yellow, green, cyan,
// blue, magenta), saturation 1, value |z| (linear, clamped to 1).
Rgb color_encode(Complex z);
// Inverse of color_encode up to 8-bit quantization.
Complex color_decode(const Rgb& rgb);

PanelFrame panel_frame(const Spinor& s);

}  // namespace spinball
