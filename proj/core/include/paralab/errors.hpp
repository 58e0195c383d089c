#pragma once

#include <stdexcept>
#include <string>

namespace paralab {

enum class ErrorClass {
  precondition,  // exit code 2
  convergence,   // exit code 3
  resource,      // exit code 4
};

class Error : public std::runtime_error {
 public:
  Error(const char* name, ErrorClass cls, const std::string& what)
      : std::runtime_error(what), name_(name), class_(cls) {}
  const char* name() const noexcept { return name_; }
  ErrorClass error_class() const noexcept { return class_; }

 private:
  const char* name_;
  ErrorClass class_;
};

#define PARALAB_ERROR(Name, Cls)                                      \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, Cls, what) {} \
  }

PARALAB_ERROR(DomainError, ErrorClass::precondition);
PARALAB_ERROR(RangeError, ErrorClass::precondition);
PARALAB_ERROR(NotParabolicError, ErrorClass::precondition);
PARALAB_ERROR(EscapeError, ErrorClass::precondition);
PARALAB_ERROR(BranchError, ErrorClass::precondition);
PARALAB_ERROR(RayError, ErrorClass::precondition);
PARALAB_ERROR(NotInvertibleError, ErrorClass::precondition);
PARALAB_ERROR(ObstructionError, ErrorClass::precondition);
PARALAB_ERROR(PrecisionError, ErrorClass::convergence);
PARALAB_ERROR(ConvergenceError, ErrorClass::convergence);
PARALAB_ERROR(NonMonotoneError, ErrorClass::convergence);
PARALAB_ERROR(TruncationError, ErrorClass::convergence);
PARALAB_ERROR(QuadratureError, ErrorClass::convergence);
PARALAB_ERROR(IllConditionedError, ErrorClass::convergence);
PARALAB_ERROR(FitError, ErrorClass::convergence);
PARALAB_ERROR(InversionError, ErrorClass::convergence);
PARALAB_ERROR(DetectionError, ErrorClass::convergence);
PARALAB_ERROR(ResourceError, ErrorClass::resource);

#undef PARALAB_ERROR

inline int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::precondition: return 2;
    case ErrorClass::convergence: return 3;
    case ErrorClass::resource: return 4;
  }
  return 1;
}

}  // namespace paralab
