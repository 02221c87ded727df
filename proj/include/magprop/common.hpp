#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace magprop {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr Complex kImag{0.0, 1.0};

/// Thrown for malformed run specifications (unknown problem, incompatible
/// scheme combination, bad config). CLI maps it to exit code 2.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on numerical failure (non-convergence, NaN state). CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Small fixed-capacity real vector for spatial dimensions d <= 3.
/// Laser values, drift vectors and Magnus coefficient components live here.
class Vec {
 public:
  Vec() : dims_(0), a_{0.0, 0.0, 0.0} {}
  explicit Vec(int dims, double fill = 0.0) : dims_(dims), a_{} {
    for (int i = 0; i < dims_; ++i) a_[i] = fill;
  }
  Vec(std::initializer_list<double> xs) : dims_(0), a_{} {
    for (double x : xs) a_[dims_++] = x;
  }

  int dims() const { return dims_; }
  double& operator[](int i) { return a_[i]; }
  double operator[](int i) const { return a_[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dims_; ++i) a_[i] += o.a_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dims_; ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Vec& operator*=(double c) {
    for (int i = 0; i < dims_; ++i) a_[i] *= c;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double c, Vec a) { return a *= c; }
  friend Vec operator*(Vec a, double c) { return a *= c; }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < dims_; ++i) s += a_[i] * o.a_[i];
    return s;
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < dims_; ++i) m = std::max(m, std::abs(a_[i]));
    return m;
  }

 private:
  int dims_;
  std::array<double, 3> a_;
};

}  // namespace magprop
