#pragma once

// Forward-mode automatic differentiation.
//
// Jet2 carries value, gradient and Hessian of a scalar field on R^n
// (n <= kMaxVars).  Dual2<S> carries a value and its first and second
// derivative in one scalar parameter; S may itself be a Jet2, which is how
// mixed radial/chart derivatives are formed.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "bfcone/error.hpp"

namespace bfcone {

inline constexpr int kMaxVars = 10;

class Jet2 {
 public:
  Jet2() = default;
  /// Constant with n independent variables.
  Jet2(double v, int n = 0) : n_(n), v_(v) {}  // NOLINT(google-explicit-constructor)

  static Jet2 variable(double v, int index, int n) {
    Jet2 j(v, n);
    j.g_[index] = 1.0;
    return j;
  }

  int nvars() const { return n_; }
  double value() const { return v_; }
  double grad(int i) const { return g_[i]; }
  double hess(int i, int k) const { return h_[i * kMaxVars + k]; }
  double& grad(int i) { return g_[i]; }
  double& hess(int i, int k) { return h_[i * kMaxVars + k]; }

  // Chain rule for a unary function with derivatives f0, f1, f2 at value.
  Jet2 apply(double f0, double f1, double f2) const {
    Jet2 r(f0, n_);
    for (int i = 0; i < n_; ++i) r.g_[i] = f1 * g_[i];
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k <= i; ++k) {
        double h = f1 * hess(i, k) + f2 * g_[i] * g_[k];
        r.hess(i, k) = h;
        r.hess(k, i) = h;
      }
    return r;
  }

  Jet2& operator+=(const Jet2& o) {
    widen(o);
    v_ += o.v_;
    for (int i = 0; i < o.n_; ++i) g_[i] += o.g_[i];
    for (int i = 0; i < o.n_; ++i)
      for (int k = 0; k < o.n_; ++k) hess(i, k) += o.hess(i, k);
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    widen(o);
    v_ -= o.v_;
    for (int i = 0; i < o.n_; ++i) g_[i] -= o.g_[i];
    for (int i = 0; i < o.n_; ++i)
      for (int k = 0; k < o.n_; ++k) hess(i, k) -= o.hess(i, k);
    return *this;
  }
  Jet2& operator*=(const Jet2& o) {
    widen(o);
    const int n = n_;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k <= i; ++k) {
        double h = v_ * o.hess(i, k) + o.v_ * hess(i, k) + g_[i] * o.g_[k] + g_[k] * o.g_[i];
        hess(i, k) = h;
        hess(k, i) = h;
      }
    for (int i = 0; i < n; ++i) g_[i] = v_ * o.g_[i] + o.v_ * g_[i];
    v_ *= o.v_;
    return *this;
  }
  Jet2& operator/=(const Jet2& o) { return *this *= o.inverse(); }

  Jet2& operator+=(double s) { v_ += s; return *this; }
  Jet2& operator-=(double s) { v_ -= s; return *this; }
  Jet2& operator*=(double s) {
    v_ *= s;
    for (int i = 0; i < n_; ++i) g_[i] *= s;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) hess(i, k) *= s;
    return *this;
  }
  Jet2& operator/=(double s) { return *this *= (1.0 / s); }

  Jet2 inverse() const {
    if (v_ == 0.0) throw Error(ErrorKind::DomainError, "division by zero jet");
    double iv = 1.0 / v_;
    return apply(iv, -iv * iv, 2.0 * iv * iv * iv);
  }

  Jet2 operator-() const { Jet2 r = *this; r *= -1.0; return r; }

 private:
  void widen(const Jet2& o) {
    if (o.n_ > n_) n_ = o.n_;
  }

  int n_ = 0;
  double v_ = 0.0;
  std::array<double, kMaxVars> g_{};
  std::array<double, kMaxVars * kMaxVars> h_{};
};

inline Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
inline Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
inline Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
inline Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }
inline Jet2 operator+(Jet2 a, double s) { return a += s; }
inline Jet2 operator+(double s, Jet2 a) { return a += s; }
inline Jet2 operator-(Jet2 a, double s) { return a -= s; }
inline Jet2 operator-(double s, const Jet2& a) { return -a + s; }
inline Jet2 operator*(Jet2 a, double s) { return a *= s; }
inline Jet2 operator*(double s, Jet2 a) { return a *= s; }
inline Jet2 operator/(Jet2 a, double s) { return a /= s; }
inline Jet2 operator/(double s, const Jet2& a) { return a.inverse() * s; }

inline bool operator<(const Jet2& a, const Jet2& b) { return a.value() < b.value(); }
inline bool operator>(const Jet2& a, const Jet2& b) { return a.value() > b.value(); }

inline Jet2 sqrt(const Jet2& a) {
  double v = a.value();
  if (!(v > 0.0)) throw Error(ErrorKind::DomainError, "sqrt of non-positive jet");
  double s = std::sqrt(v);
  return a.apply(s, 0.5 / s, -0.25 / (s * v));
}
inline Jet2 exp(const Jet2& a) {
  double e = std::exp(a.value());
  return a.apply(e, e, e);
}
inline Jet2 log(const Jet2& a) {
  double v = a.value();
  if (!(v > 0.0)) throw Error(ErrorKind::DomainError, "log of non-positive jet");
  return a.apply(std::log(v), 1.0 / v, -1.0 / (v * v));
}
inline Jet2 sin(const Jet2& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(s, c, -s);
}
inline Jet2 cos(const Jet2& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(c, -s, -c);
}
inline Jet2 tan(const Jet2& a) {
  double t = std::tan(a.value());
  double d = 1.0 + t * t;
  return a.apply(t, d, 2.0 * t * d);
}
inline Jet2 tanh(const Jet2& a) {
  double t = std::tanh(a.value());
  double d = 1.0 - t * t;
  return a.apply(t, d, -2.0 * t * d);
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.value(); }

/// Value plus first and second derivative in one parameter.
template <class S>
struct Dual2 {
  S v{}, d{}, dd{};

  Dual2() = default;
  Dual2(const S& value) : v(value), d(0.0), dd(0.0) {}  // NOLINT(google-explicit-constructor)
  Dual2(const S& value, const S& d1, const S& d2) : v(value), d(d1), dd(d2) {}
  static Dual2 variable(const S& value) { return Dual2(value, S(1.0), S(0.0)); }

  Dual2 apply(const S& f0, const S& f1, const S& f2) const {
    return Dual2(f0, f1 * d, f1 * dd + f2 * d * d);
  }
  Dual2 operator-() const { return Dual2(-v, -d, -dd); }
  Dual2& operator+=(const Dual2& o) { v += o.v; d += o.d; dd += o.dd; return *this; }
  Dual2& operator-=(const Dual2& o) { v -= o.v; d -= o.d; dd -= o.dd; return *this; }
  Dual2& operator*=(const Dual2& o) {
    S nd = v * o.d + d * o.v;
    S ndd = v * o.dd + 2.0 * d * o.d + dd * o.v;
    v = v * o.v;
    d = nd;
    dd = ndd;
    return *this;
  }
  Dual2 inverse() const {
    S iv = 1.0 / v;
    return apply(iv, -iv * iv, 2.0 * iv * iv * iv);
  }
  Dual2& operator/=(const Dual2& o) { return *this *= o.inverse(); }
  Dual2& operator*=(double s) { v *= s; d *= s; dd *= s; return *this; }
};

template <class S> Dual2<S> operator+(Dual2<S> a, const Dual2<S>& b) { return a += b; }
template <class S> Dual2<S> operator-(Dual2<S> a, const Dual2<S>& b) { return a -= b; }
template <class S> Dual2<S> operator*(Dual2<S> a, const Dual2<S>& b) { return a *= b; }
template <class S> Dual2<S> operator/(Dual2<S> a, const Dual2<S>& b) { return a /= b; }
template <class S> Dual2<S> operator+(Dual2<S> a, double s) { a.v += s; return a; }
template <class S> Dual2<S> operator+(double s, Dual2<S> a) { a.v += s; return a; }
template <class S> Dual2<S> operator-(Dual2<S> a, double s) { a.v -= s; return a; }
template <class S> Dual2<S> operator-(double s, const Dual2<S>& a) { return -a + s; }
template <class S> Dual2<S> operator*(Dual2<S> a, double s) { return a *= s; }
template <class S> Dual2<S> operator*(double s, Dual2<S> a) { return a *= s; }
template <class S> Dual2<S> operator/(Dual2<S> a, double s) { return a *= (1.0 / s); }
template <class S> Dual2<S> operator/(double s, const Dual2<S>& a) { return a.inverse() * s; }

template <class S> Dual2<S> sqrt(const Dual2<S>& a) {
  using std::sqrt;
  S s = sqrt(a.v);
  return a.apply(s, 0.5 / s, -0.25 / (s * a.v));
}
template <class S> Dual2<S> exp(const Dual2<S>& a) {
  using std::exp;
  S e = exp(a.v);
  return a.apply(e, e, e);
}
template <class S> Dual2<S> log(const Dual2<S>& a) {
  using std::log;
  return a.apply(log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}
template <class S> Dual2<S> sin(const Dual2<S>& a) {
  using std::cos;
  using std::sin;
  S s = sin(a.v);
  return a.apply(s, cos(a.v), -s);
}
template <class S> Dual2<S> cos(const Dual2<S>& a) {
  using std::cos;
  using std::sin;
  S c = cos(a.v);
  return a.apply(c, -sin(a.v), -c);
}
template <class S> Dual2<S> tan(const Dual2<S>& a) {
  using std::tan;
  S t = tan(a.v);
  S d = 1.0 + t * t;
  return a.apply(t, d, 2.0 * t * d);
}
template <class S> Dual2<S> tanh(const Dual2<S>& a) {
  using std::tanh;
  S t = tanh(a.v);
  S d = 1.0 - t * t;
  return a.apply(t, d, -2.0 * t * d);
}

template <class S> double value_of(const Dual2<S>& x) { return value_of(x.v); }

/// Result of a radial derivative.
struct Jet1r {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

struct HessianResult {
  double value = 0.0;
  std::vector<double> grad;
  std::vector<std::vector<double>> hess;
};

using JetField = std::function<Jet2(std::span<const Jet2>)>;

/// Exact value, gradient and Hessian of fn at point.
HessianResult hessian(const JetField& fn, std::span<const double> point);

/// Exact first and second derivative of fn at r0.
Jet1r deriv_r(const std::function<Dual2<double>(const Dual2<double>&)>& fn, double r0);

}  // namespace bfcone
