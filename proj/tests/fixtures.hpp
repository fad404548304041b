#pragma once

#include "qse/state.hpp"

namespace qse::test {

// Arbitrary two-qubit state used by the spectrum fixtures.
inline const AmplitudeVector kFourTone = {
    {-0.2518, 0.0766},
    {-0.1907, -0.1778},
    {-0.6936, 0.3228},
    {0.3389, -0.4032},
};

}  // namespace qse::test
