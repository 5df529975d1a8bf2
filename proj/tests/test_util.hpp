#pragma once

#include <initializer_list>

#include <gtest/gtest.h>

#include "elicit/error.hpp"
#include "elicit/simplex.hpp"

namespace elicit::testing {

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline Distribution dist(std::initializer_list<double> v) { return make_distribution(vec(v)); }

template <typename Fn>
Errc error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an elicit::Error";
  return Errc::ConfigParse;
}

}  // namespace elicit::testing
