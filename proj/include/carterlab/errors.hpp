#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace carterlab {

// Exit-code buckets used by the CLI. math: a verified mathematical statement
// failed to hold. input: bad config, schema, or parameter domain. solver: a
// numerical method failed to converge or a linear solve broke down.
enum class ErrorKind : int { math = 1, input = 2, solver = 3 };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), kind_(kind), name_(std::move(name)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

private:
  ErrorKind kind_;
  std::string name_;
};

#define CARTERLAB_DEFINE_ERROR(Name, Kind)                                     \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, #Name, what) {} \
  }

// input-domain errors
CARTERLAB_DEFINE_ERROR(SchemaError, input);
CARTERLAB_DEFINE_ERROR(RangeError, input);
CARTERLAB_DEFINE_ERROR(ParameterDomain, input);
CARTERLAB_DEFINE_ERROR(DegeneratePoint, input);
CARTERLAB_DEFINE_ERROR(EvaluationAtPole, input);
CARTERLAB_DEFINE_ERROR(NotStrictSlab, input);
CARTERLAB_DEFINE_ERROR(DimensionMismatch, input);
CARTERLAB_DEFINE_ERROR(WrongMode, input);
CARTERLAB_DEFINE_ERROR(Superextremal, input);
CARTERLAB_DEFINE_ERROR(NotExtremal, input);
CARTERLAB_DEFINE_ERROR(WallRange, input);
CARTERLAB_DEFINE_ERROR(NearResonance, input);
CARTERLAB_DEFINE_ERROR(DomainOfDependenceExceeded, input);
CARTERLAB_DEFINE_ERROR(InsufficientHistory, input);

// mathematical failures
CARTERLAB_DEFINE_ERROR(CertificateFailure, math);

// solver failures
CARTERLAB_DEFINE_ERROR(SolverFailure, solver);
CARTERLAB_DEFINE_ERROR(LinearSolveFailure, solver);
CARTERLAB_DEFINE_ERROR(NotSimpleZero, solver);
CARTERLAB_DEFINE_ERROR(StepFailure, solver);
CARTERLAB_DEFINE_ERROR(BracketFailure, solver);
CARTERLAB_DEFINE_ERROR(IntegratorFailure, solver);

#undef CARTERLAB_DEFINE_ERROR

}  // namespace carterlab
