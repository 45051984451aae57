#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "spinball/rotor.hpp"

namespace spinball::testing {

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v;
  do {
    v = Vec3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-3);
  return v.normalized();
}

inline Spinor random_spinor(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Spinor s{{g(rng), g(rng)}, {g(rng), g(rng)}};
  return s.normalized();
}

inline SU2Element random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return SU2Element::from_components(g(rng), g(rng), g(rng), g(rng));
}

// Pauli matrices, written out independently of the quaternion table.
inline Mat2c pauli(int k) {
  const Complex i{0.0, 1.0};
  Mat2c m;
  if (k == 0) m << 0, 1, 1, 0;
  if (k == 1) m << 0, -i, i, 0;
  if (k == 2) m << 1, 0, 0, -1;
  return m;
}

// exp(m) by scaling and squaring of a Taylor series.
inline Mat2c expm_series(const Mat2c& m) {
  int squarings = 0;
  Mat2c a = m;
  while (a.norm() > 0.25) {
    a /= 2.0;
    ++squarings;
  }
  Mat2c term = Mat2c::Identity();
  Mat2c sum = Mat2c::Identity();
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

// exp(-i angle sigma.n / 2) from the series.
inline Mat2c su2_oracle(const Vec3& n, double angle) {
  const Complex i{0.0, 1.0};
  const Mat2c gen = n.x() * pauli(0) + n.y() * pauli(1) + n.z() * pauli(2);
  return expm_series(-i * (angle / 2.0) * gen);
}

// 3x3 rotation by the series of the cross-product generator.
inline Mat3 so3_oracle(const Vec3& n, double angle) {
  Mat3 k;
  k << 0, -n.z(), n.y(), n.z(), 0, -n.x(), -n.y(), n.x(), 0;
  Mat3 a = angle * k;
  int squarings = 0;
  while (a.norm() > 0.25) {
    a /= 2.0;
    ++squarings;
  }
  Mat3 term = Mat3::Identity();
  Mat3 sum = Mat3::Identity();
  for (int j = 1; j < 30; ++j) {
    term = term * a / static_cast<double>(j);
    sum += term;
  }
  for (int j = 0; j < squarings; ++j) sum = sum * sum;
  return sum;
}

}  // namespace spinball::testing
