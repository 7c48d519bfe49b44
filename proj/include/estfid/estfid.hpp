#pragma once

// Umbrella header: pulls in the whole library.

#include "estfid/asymptotics.hpp"
#include "estfid/dirichlet_graph.hpp"
#include "estfid/errors.hpp"
#include "estfid/estimation.hpp"
#include "estfid/fem_simplex.hpp"
#include "estfid/kahn_bound.hpp"
#include "estfid/parallel.hpp"
#include "estfid/rng.hpp"
#include "estfid/sparse_matrix.hpp"
#include "estfid/spectral.hpp"
#include "estfid/young_lattice.hpp"
