#pragma once

#include <functional>
#include <span>
#include <vector>

#include "decnet/value.hpp"

namespace decnet {

// Symmetric, nonnegative, zero on identical arguments. The triangle
// inequality is only needed for vp-tree correctness guarantees; the shipped
// defaults satisfy it.
using DistanceFunction = std::function<double(const Value&, const Value&)>;

// Collapses per-component distances into one value.
using TupleReducer = std::function<double(std::span<const double>)>;

TupleReducer l2_reducer();

// Applies the reducer to precomputed component distances, rejecting
// negative components.
double tuple_distance(std::span<const double> components, const TupleReducer& reducer);

// |a - b| over reals and integers.
DistanceFunction absolute_distance();

// 0 when equal, 1 otherwise; defined for every value type.
DistanceFunction discrete_distance();

// Componentwise distances reduced by `reducer` (L2 when omitted).
DistanceFunction tuple_distance_fn(std::vector<DistanceFunction> components,
                                   TupleReducer reducer = l2_reducer());

// Dispatch on the value type: booleans 0/1, integers and reals |a - b|,
// tuples recursively under the L2 reducer. Other types have no shipped
// default and raise InvalidParameter.
DistanceFunction default_distance();

}  // namespace decnet
