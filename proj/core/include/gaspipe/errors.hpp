#pragma once

#include <stdexcept>
#include <string>

namespace gaspipe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GASPIPE_DEFINE_ERROR(Name)              \
    class Name : public Error {                 \
    public:                                     \
        using Error::Error;                     \
    }

GASPIPE_DEFINE_ERROR(InvalidParameter);
GASPIPE_DEFINE_ERROR(DomainError);
GASPIPE_DEFINE_ERROR(UnsupportedBranch);
// G reached zero inside the pipe (flow reversal).
GASPIPE_DEFINE_ERROR(ProfileDegenerate);
// G diverged before x = L.
GASPIPE_DEFINE_ERROR(ProfileSingular);
GASPIPE_DEFINE_ERROR(NumericalError);
GASPIPE_DEFINE_ERROR(DegenerateWeight);
GASPIPE_DEFINE_ERROR(UnsupportedReversal);
GASPIPE_DEFINE_ERROR(DegenerateLinearization);
GASPIPE_DEFINE_ERROR(CalibrationError);
GASPIPE_DEFINE_ERROR(StateInvalid);
GASPIPE_DEFINE_ERROR(StepError);
GASPIPE_DEFINE_ERROR(AlignmentError);
GASPIPE_DEFINE_ERROR(ConfigError);

#undef GASPIPE_DEFINE_ERROR

}  // namespace gaspipe
