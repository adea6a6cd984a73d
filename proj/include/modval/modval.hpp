#pragma once

#include "modval/errors.hpp"
#include "modval/quantum_core.hpp"
#include "modval/pointer_grid.hpp"
#include "modval/modular_dynamics.hpp"
#include "modval/faux_qubit.hpp"
#include "modval/mzi.hpp"
#include "modval/csv.hpp"
