#include "spinball/spin_state.hpp"

#include <algorithm>
#include <cmath>

namespace spinball {

namespace {

double wrap_positive(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

}  // namespace

BlochPoint bloch_point_from_vector(const Vec3& v) {
  BlochPoint p;
  const Vec3 u = v.normalized();
  const double rho = std::hypot(u.x(), u.y());
  p.theta = std::atan2(rho, u.z());
  p.phi = rho > 0.0 ? wrap_positive(std::atan2(u.y(), u.x())) : 0.0;
  p.unit_vector = {std::cos(p.phi) * std::sin(p.theta), std::sin(p.phi) * std::sin(p.theta), std::cos(p.theta)};
  return p;
}

BlochPoint bloch_point(const Spinor& s) {
  const Complex c = std::conj(s.alpha) * s.beta;
  const double n = s.norm_squared();
  const Vec3 v{2.0 * c.real() / n, 2.0 * c.imag() / n, (std::norm(s.alpha) - std::norm(s.beta)) / n};
  return bloch_point_from_vector(v);
}

Spinor spinor_from_euler(double theta, double phi, double delta, int sign) {
  const double sg = sign < 0 ? -1.0 : 1.0;
  return {sg * std::polar(std::cos(theta / 2.0), -(delta + phi) / 2.0),
          sg * std::polar(std::sin(theta / 2.0), -(delta - phi) / 2.0)};
}

HopfCoordinates hopf_coordinates(const Spinor& s) {
  HopfCoordinates h;
  h.base = bloch_point(s);
  // arg(alpha) = -(delta + phi)/2 and arg(beta) = -(delta - phi)/2; read delta
  // off the larger amplitude. This fixes delta mod 4pi with sign +1.
  double delta = std::abs(s.alpha) >= std::abs(s.beta) ? -2.0 * std::arg(s.alpha) - h.base.phi
                                                       : -2.0 * std::arg(s.beta) + h.base.phi;
  delta = std::fmod(delta, 2.0 * kTwoPi);
  if (delta < 0.0) delta += 2.0 * kTwoPi;
  // delta + 2pi flips the overall sign.
  if (delta >= kTwoPi) {
    delta -= kTwoPi;
    h.sign = -1;
  }
  h.fiber_phase = delta;
  return h;
}

Spinor spinor_along(const Vec3& n) {
  const BlochPoint p = bloch_point_from_vector(n);
  return {Complex{std::cos(p.theta / 2.0), 0.0}, std::polar(std::sin(p.theta / 2.0), p.phi)};
}

Rgb color_encode(Complex z) {
  const double value = std::min(std::abs(z), 1.0);
  if (value == 0.0) return {0, 0, 0};
  const double hue = wrap_positive(std::arg(z)) / (kPi / 3.0);  // [0, 6)
  const int sector = static_cast<int>(std::floor(hue)) % 6;
  const double f = hue - std::floor(hue);
  const double rising = value * f;
  const double falling = value * (1.0 - f);
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = value; g = rising; break;
    case 1: r = falling; g = value; break;
    case 2: g = value; b = rising; break;
    case 3: g = falling; b = value; break;
    case 4: r = rising; b = value; break;
    default: r = value; b = falling; break;
  }
  return {to_byte(r), to_byte(g), to_byte(b)};
}

Complex color_decode(const Rgb& rgb) {
  const double r = rgb[0] / 255.0, g = rgb[1] / 255.0, b = rgb[2] / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  if (mx == 0.0) return {0.0, 0.0};
  const double c = mx - mn;
  double hue = 0.0;  // in sixths of a turn
  if (c > 0.0) {
    if (mx == r) {
      hue = (g - b) / c;
    } else if (mx == g) {
      hue = 2.0 + (b - r) / c;
    } else {
      hue = 4.0 + (r - g) / c;
    }
  }
  return std::polar(mx, hue * kPi / 3.0);
}

PanelFrame panel_frame(const Spinor& s) {
  return {color_encode(s.alpha), color_encode(s.beta), s.alpha, s.beta};
}

}  // namespace spinball
