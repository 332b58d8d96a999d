#ifndef GERBEKIT_IMAG_HPP
#define GERBEKIT_IMAG_HPP

#include <cmath>
#include <complex>
#include <ostream>

namespace gerbekit {

// An element i·value of the Lie algebra iR of the circle group.
struct Imag {
  double value = 0.0;

  constexpr Imag() = default;
  constexpr explicit Imag(double v) : value(v) {}

  std::complex<double> complex() const { return {0.0, value}; }

  Imag& operator+=(Imag o) {
    value += o.value;
    return *this;
  }
  Imag& operator-=(Imag o) {
    value -= o.value;
    return *this;
  }
  Imag& operator*=(double s) {
    value *= s;
    return *this;
  }
  friend Imag operator+(Imag a, Imag b) { return Imag(a.value + b.value); }
  friend Imag operator-(Imag a, Imag b) { return Imag(a.value - b.value); }
  friend Imag operator-(Imag a) { return Imag(-a.value); }
  friend Imag operator*(double s, Imag a) { return Imag(s * a.value); }
  friend Imag operator*(Imag a, double s) { return Imag(s * a.value); }
  friend Imag operator/(Imag a, double s) { return Imag(a.value / s); }
  friend bool operator==(Imag a, Imag b) = default;

  friend std::ostream& operator<<(std::ostream& os, Imag a) { return os << a.value << "i"; }
};

inline double abs(Imag a) { return std::abs(a.value); }

// i·s for a real scalar s.
constexpr Imag times_i(double s) { return Imag(s); }

}  // namespace gerbekit

#endif
