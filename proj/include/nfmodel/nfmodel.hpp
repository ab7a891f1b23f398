#pragma once

// Umbrella header: exact models of number fields, certified embeddings,
// integer lattice reduction, and explicit height/count bounds.

#include "nfmodel/bounds.hpp"
#include "nfmodel/embeddings.hpp"
#include "nfmodel/interval.hpp"
#include "nfmodel/io.hpp"
#include "nfmodel/lattice.hpp"
#include "nfmodel/mat.hpp"
#include "nfmodel/model.hpp"
#include "nfmodel/nf.hpp"
#include "nfmodel/poly.hpp"
#include "nfmodel/roots.hpp"
#include "nfmodel/short_basis.hpp"
#include "nfmodel/util.hpp"
