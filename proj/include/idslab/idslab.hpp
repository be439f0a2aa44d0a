#pragma once

// Umbrella header for the ids-lab library: spectral statistics of ergodic
// random Schroedinger operators on Z^d-periodic covering graphs.

#include "idslab/config.hpp"
#include "idslab/cover_region.hpp"
#include "idslab/csv.hpp"
#include "idslab/distributions.hpp"
#include "idslab/errors.hpp"
#include "idslab/folner.hpp"
#include "idslab/fundamental_cell.hpp"
#include "idslab/group_element.hpp"
#include "idslab/ids.hpp"
#include "idslab/ids_curve.hpp"
#include "idslab/model.hpp"
#include "idslab/omega.hpp"
#include "idslab/parallel.hpp"
#include "idslab/random_fields.hpp"
#include "idslab/rational.hpp"
#include "idslab/rng.hpp"
#include "idslab/runner.hpp"
#include "idslab/single_site.hpp"
#include "idslab/skyline_ldlt.hpp"
#include "idslab/spectral.hpp"
#include "idslab/svg.hpp"
#include "idslab/version.hpp"
#include "idslab/weighted_operator.hpp"
