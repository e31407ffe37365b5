#pragma once

// Minimal complex arithmetic over a generic real scalar (double, Jet2,
// Dual2<...>).  std::complex is only specified for floating types.

#include <complex>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

namespace bfcone {

template <class T>
struct Cx {
  T re{}, im{};

  Cx() : re(0.0), im(0.0) {}
  Cx(const T& r, const T& i) : re(r), im(i) {}
  explicit Cx(const T& r) : re(r), im(0.0) {}

  Cx conj() const { return Cx(re, -im); }
  Cx times_i() const { return Cx(-im, re); }
  T norm2() const { return re * re + im * im; }

  Cx& operator+=(const Cx& o) { re += o.re; im += o.im; return *this; }
  Cx& operator-=(const Cx& o) { re -= o.re; im -= o.im; return *this; }
};

template <class T> Cx<T> operator+(Cx<T> a, const Cx<T>& b) { return a += b; }
template <class T> Cx<T> operator-(Cx<T> a, const Cx<T>& b) { return a -= b; }
template <class T> Cx<T> operator-(const Cx<T>& a) { return Cx<T>(-a.re, -a.im); }
template <class T> Cx<T> operator*(const Cx<T>& a, const Cx<T>& b) {
  return Cx<T>(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
template <class T> Cx<T> operator*(const Cx<T>& a, const T& s) { return Cx<T>(a.re * s, a.im * s); }
template <class T> Cx<T> operator*(const T& s, const Cx<T>& a) { return Cx<T>(a.re * s, a.im * s); }
template <class T>
  requires(!std::is_same_v<T, double>)
Cx<T> operator*(const Cx<T>& a, double s) {
  return Cx<T>(a.re * s, a.im * s);
}
template <class T> Cx<T> operator*(const Cx<T>& a, std::complex<double> c) {
  return Cx<T>(a.re * c.real() - a.im * c.imag(), a.re * c.imag() + a.im * c.real());
}
template <class T> Cx<T> operator*(std::complex<double> c, const Cx<T>& a) { return a * c; }
template <class T> Cx<T> operator/(const Cx<T>& a, const T& s) { return Cx<T>(a.re / s, a.im / s); }

template <class T>
using CVec = std::vector<Cx<T>>;

/// Indefinite pairing (a,b) = -a0 conj(b0) + sum a_j conj(b_j).
template <class T>
Cx<T> eta_pair(const CVec<T>& a, const CVec<T>& b) {
  Cx<T> s = a[0] * b[0].conj();
  s = -s;
  for (std::size_t j = 1; j < a.size(); ++j) s += a[j] * b[j].conj();
  return s;
}

/// Standard positive pairing <a,b> = sum a_j conj(b_j).
template <class T>
Cx<T> std_pair(const CVec<T>& a, const CVec<T>& b) {
  Cx<T> s;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j].conj();
  return s;
}

/// Constant complex matrix times a generic complex vector.
template <class T>
CVec<T> mat_apply(const Eigen::MatrixXcd& m, const CVec<T>& v) {
  const int n = static_cast<int>(m.rows());
  CVec<T> out(n);
  for (int i = 0; i < n; ++i) {
    Cx<T> s;
    for (int k = 0; k < static_cast<int>(m.cols()); ++k) {
      if (m(i, k) != std::complex<double>(0.0, 0.0)) s += v[k] * m(i, k);
    }
    out[i] = s;
  }
  return out;
}

template <class T>
CVec<T> lift(const Eigen::VectorXcd& v) {
  CVec<T> out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = Cx<T>(T(v(i).real()), T(v(i).imag()));
  return out;
}

}  // namespace bfcone
