#ifndef LDLCERT_ERRORS_HPP
#define LDLCERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ldlc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ingestion / data-model errors
struct EmptyDataError : Error { using Error::Error; };
struct ZeroInputMassError : Error { using Error::Error; };
struct NoDetectionsError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// Parameter errors
struct InvalidEfficiencyError : Error { using Error::Error; };
struct DegenerateBoundsError : Error { using Error::Error; };
struct SignalingInputError : Error { using Error::Error; };

// Enumeration / solver errors
struct TooLargeError : Error { using Error::Error; };

}  // namespace ldlc

#endif
