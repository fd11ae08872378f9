#pragma once

#include <stdexcept>
#include <string>

namespace combclassic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define COMBCLASSIC_ERROR(Name)                                            \
    struct Name : Error {                                                  \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

COMBCLASSIC_ERROR(LayoutMismatch);
COMBCLASSIC_ERROR(DimensionMismatch);
COMBCLASSIC_ERROR(NotCP);
COMBCLASSIC_ERROR(NotCptp);
COMBCLASSIC_ERROR(NotAState);
COMBCLASSIC_ERROR(NotPovm);
COMBCLASSIC_ERROR(NonRealProbability);
COMBCLASSIC_ERROR(InconsistentFamily);
COMBCLASSIC_ERROR(SizeLimit);
COMBCLASSIC_ERROR(WrongArity);
COMBCLASSIC_ERROR(BadParameter);
COMBCLASSIC_ERROR(BadTimes);
COMBCLASSIC_ERROR(GridTooCoarse);
COMBCLASSIC_ERROR(SolverFailure);

#undef COMBCLASSIC_ERROR

// Carries the JSON pointer of the offending node.
struct SchemaError : Error {
    SchemaError(std::string pointer_, const std::string& what)
        : Error("SchemaError at " + pointer_ + ": " + what), pointer(std::move(pointer_)) {}
    std::string pointer;
};

}  // namespace combclassic
