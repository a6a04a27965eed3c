#pragma once

#include "quasispec/errors.hpp"
#include "quasispec/parallel.hpp"
#include "quasispec/numerics.hpp"
#include "quasispec/arithmetic.hpp"
#include "quasispec/model.hpp"
#include "quasispec/lyapunov.hpp"
#include "quasispec/spectrum.hpp"
#include "quasispec/gordon.hpp"
#include "quasispec/cohomology.hpp"

namespace quasispec {
inline constexpr const char* kVersion = "0.1.0";
}
