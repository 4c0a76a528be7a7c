#pragma once

#include <stdexcept>
#include <string>

namespace decnet {

// Every failure the library reports carries a machine-checkable kind plus a
// human-readable message. Tests match on the kind, messages are free-form.
enum class ErrorKind {
  InvalidParameter,    // distribution parameter outside its domain
  UnknownParent,       // reference to an element id that does not exist
  InvalidValue,        // malformed Value (NaN real, bad graph, bad sequence)
  MissingDecision,     // no decision value supplied for a Decision element
  DecisionOutOfRange,  // supplied decision value not in the declared range
  EvalFailure,         // Apply/Chain user function threw
  UnsupportedEvidence, // evidence on an element kind that cannot be weighted
  DegenerateEvidence,  // all sampled worlds have zero weight
  NotEnumerable,       // element with infinite or continuous support
  OracleUnavailable,   // neither enumeration nor a closed form applies
  EmptyStore,          // policy compilation from an empty sample store
  UnknownParentValue,  // exact policy queried at an unseen parent value
  BadOrdering,         // decision sequence inconsistent with the model DAG
  CodecFailure,        // sample store (de)serialization problem
  InvalidSpec,         // malformed experiment/config input
  IoFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace decnet
