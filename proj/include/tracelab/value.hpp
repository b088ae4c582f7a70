#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "tracelab/cyclo.hpp"

namespace tracelab {

using Complex = std::complex<double>;

/// Uniform access to the two value rings: exact CycloValue and float Complex.
template <class V>
struct value_traits;

template <>
struct value_traits<CycloValue> {
  static constexpr bool exact = true;
  static CycloValue zero() { return CycloValue(); }
  static CycloValue integer(std::int64_t v) { return CycloValue::integer(v); }
  static CycloValue rational(std::int64_t n, std::int64_t d) { return CycloValue::rational(n, d); }
  static CycloValue root(std::int64_t e, std::int64_t n) { return CycloValue::root(e, n); }
  static CycloValue times_root(const CycloValue& v, std::int64_t e, std::int64_t n) { return v.times_root(e, n); }
  static CycloValue scaled(const CycloValue& v, std::int64_t num, std::int64_t den) { return v.scaled(num, den); }
  static CycloValue conj(const CycloValue& v) { return v.conj(); }
  static CycloValue from_counts(std::vector<std::int64_t> counts, std::int64_t n) {
    return CycloValue::from_counts(std::move(counts), n);
  }
  static bool is_zero(const CycloValue& v, double = 0.0) { return v.is_zero(); }
  static bool equal(const CycloValue& a, const CycloValue& b, double = 0.0) { return a == b; }
  static Complex to_complex(const CycloValue& v) { return v.to_complex(); }
  static std::string str(const CycloValue& v) { return v.str(); }
};

template <>
struct value_traits<Complex> {
  static constexpr bool exact = false;
  static Complex zero() { return {0.0, 0.0}; }
  static Complex integer(std::int64_t v) { return {static_cast<double>(v), 0.0}; }
  static Complex rational(std::int64_t n, std::int64_t d) { return {static_cast<double>(n) / static_cast<double>(d), 0.0}; }
  static Complex root(std::int64_t e, std::int64_t n) {
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(num::mod(e, n)) / static_cast<double>(n));
  }
  static Complex times_root(const Complex& v, std::int64_t e, std::int64_t n) { return v * root(e, n); }
  static Complex scaled(const Complex& v, std::int64_t num, std::int64_t den) {
    return v * (static_cast<double>(num) / static_cast<double>(den));
  }
  static Complex conj(const Complex& v) { return std::conj(v); }
  static Complex from_counts(const std::vector<std::int64_t>& counts, std::int64_t n) {
    Complex s{0.0, 0.0};
    for (std::int64_t e = 0; e < n; ++e)
      if (counts[e] != 0) s += static_cast<double>(counts[e]) * root(e, n);
    return s;
  }
  static bool is_zero(const Complex& v, double tol) { return std::abs(v) <= tol; }
  static bool equal(const Complex& a, const Complex& b, double tol) { return std::abs(a - b) <= tol; }
  static Complex to_complex(const Complex& v) { return v; }
  static std::string str(const Complex& v) {
    return std::to_string(v.real()) + (v.imag() < 0 ? "-" : "+") + std::to_string(std::abs(v.imag())) + "i";
  }
};

}  // namespace tracelab
