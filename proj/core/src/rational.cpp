#include "qdr/rational.hpp"

#include "qdr/errors.hpp"

namespace qdr {

Rational rat(long n, long d) {
  if (d == 0) throw EngineError("rational with zero denominator");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

GaussianRational GaussianRational::i_pow(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return GaussianRational(1);
    case 1: return i();
    case 2: return GaussianRational(-1);
    default: return {Rational(0), Rational(-1)};
  }
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  Rational r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw EngineError("division by zero in Q(i)");
  Rational n = o.norm();
  Rational r = (re * o.re + im * o.im) / n;
  im = (im * o.re - re * o.im) / n;
  re = std::move(r);
  return *this;
}

}  // namespace qdr
