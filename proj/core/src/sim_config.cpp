#include "pxflow/sim_config.hpp"

namespace pxflow {

const char* to_string(Dealias v) noexcept { return v == Dealias::two_thirds ? "two_thirds" : "none"; }
const char* to_string(Integrator v) noexcept { return v == Integrator::imex_euler ? "imex_euler" : "imex_heun"; }
const char* to_string(CflPolicy v) noexcept { return v == CflPolicy::warn ? "warn" : "error"; }
const char* to_string(SplitWeight v) noexcept { return v == SplitWeight::cubic ? "cubic" : "sqrt_inverse"; }

}  // namespace pxflow
