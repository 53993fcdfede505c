#pragma once

#include "kfks/schemes.hpp"

// Serial reference steppers. They are built only from the pointwise
// operations (evaluate, departure_cell_average, resolve_node_maxwellian,
// discrete_maxwellian) and exist to check the OpenMP kernels in schemes.cpp.
namespace kfks::reference {

void step_sl(SchemeState& state, double nu, double dt);
void step_fks(SchemeState& state, double nu, double dt);
void step_rfks(SchemeState& state, double nu, double dt);
void step(SchemeState& state, double nu, double dt);

/// Cell-center samples through evaluate() rather than index arithmetic.
CellDistribution sample(const SchemeState& state);

}  // namespace kfks::reference
