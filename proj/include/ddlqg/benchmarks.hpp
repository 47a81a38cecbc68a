#pragma once

#include "ddlqg/lti_sim.hpp"

namespace ddlqg {

/// Discretized open-loop-unstable batch reactor (0.1 s sampling),
/// nx = 4, nu = 2, ny = 2.
LtiSystem batch_reactor();

/// Input-driven rotating target, nx = 2, nu = 1, ny = 4.
LtiSystem rotating_target();

}  // namespace ddlqg
