#include "decnet/distance.hpp"

#include <cmath>

namespace decnet {

TupleReducer l2_reducer() {
  return [](std::span<const double> ds) {
    double sum = 0.0;
    for (double d : ds) sum += d * d;
    return std::sqrt(sum);
  };
}

double tuple_distance(std::span<const double> components, const TupleReducer& reducer) {
  for (double d : components) {
    if (!(d >= 0.0))
      fail(ErrorKind::InvalidParameter, "tuple distance: negative component distance");
  }
  double out = reducer(components);
  if (!(out >= 0.0)) fail(ErrorKind::InvalidParameter, "tuple distance: reducer went negative");
  return out;
}

DistanceFunction absolute_distance() {
  return [](const Value& a, const Value& b) { return std::abs(a.as_real() - b.as_real()); };
}

DistanceFunction discrete_distance() {
  return [](const Value& a, const Value& b) { return a == b ? 0.0 : 1.0; };
}

DistanceFunction tuple_distance_fn(std::vector<DistanceFunction> components, TupleReducer reducer) {
  auto comps = std::make_shared<std::vector<DistanceFunction>>(std::move(components));
  auto red = std::make_shared<TupleReducer>(std::move(reducer));
  return [comps, red](const Value& a, const Value& b) {
    const auto& xs = a.as_tuple();
    const auto& ys = b.as_tuple();
    if (xs.size() != ys.size() || xs.size() != comps->size())
      fail(ErrorKind::InvalidParameter, "tuple distance: arity mismatch");
    std::vector<double> ds(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ds[i] = (*comps)[i](xs[i], ys[i]);
    return tuple_distance(ds, *red);
  };
}

namespace {

double default_dist(const Value& a, const Value& b);

double default_tuple(const std::vector<Value>& xs, const std::vector<Value>& ys) {
  if (xs.size() != ys.size())
    fail(ErrorKind::InvalidParameter, "default distance: tuple arity mismatch");
  std::vector<double> ds(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ds[i] = default_dist(xs[i], ys[i]);
  double sum = 0.0;
  for (double d : ds) sum += d * d;
  return std::sqrt(sum);
}

double default_dist(const Value& a, const Value& b) {
  if (a.is_boolean() && b.is_boolean()) return a.as_boolean() == b.as_boolean() ? 0.0 : 1.0;
  if ((a.is_real() || a.is_integer()) && (b.is_real() || b.is_integer()))
    return std::abs(a.as_real() - b.as_real());
  if (a.is_tuple() && b.is_tuple()) return default_tuple(a.as_tuple(), b.as_tuple());
  fail(ErrorKind::InvalidParameter,
       std::string("no default distance for ") + a.type_name() + " vs " + b.type_name());
}

}  // namespace

DistanceFunction default_distance() {
  return [](const Value& a, const Value& b) { return default_dist(a, b); };
}

}  // namespace decnet
