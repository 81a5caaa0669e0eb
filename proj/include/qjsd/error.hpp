#pragma once

#include <stdexcept>
#include <string>

namespace qjsd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define QJSD_DEFINE_ERROR(Name)                         \
    class Name : public Error {                         \
    public:                                             \
        explicit Name(const std::string& what)          \
            : Error(#Name ": " + what) {}               \
    }

QJSD_DEFINE_ERROR(DimMismatch);
QJSD_DEFINE_ERROR(NonConvergence);
QJSD_DEFINE_ERROR(NotHermitian);
QJSD_DEFINE_ERROR(NotPositive);
QJSD_DEFINE_ERROR(NotUnitary);
QJSD_DEFINE_ERROR(InvalidState);
QJSD_DEFINE_ERROR(InvalidDistribution);
QJSD_DEFINE_ERROR(Undefined);
QJSD_DEFINE_ERROR(SupportViolation);
QJSD_DEFINE_ERROR(DomainError);
QJSD_DEFINE_ERROR(RejectionBudgetExceeded);
QJSD_DEFINE_ERROR(InvalidConfig);
QJSD_DEFINE_ERROR(EdgeMismatch);
QJSD_DEFINE_ERROR(DegenerateBlock);
QJSD_DEFINE_ERROR(ParseError);
QJSD_DEFINE_ERROR(IoError);

#undef QJSD_DEFINE_ERROR

} // namespace qjsd
