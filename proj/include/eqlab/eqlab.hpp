#ifndef EQLAB_EQLAB_HPP
#define EQLAB_EQLAB_HPP

// Umbrella header: exact arithmetic on the circle, measure expressions with
// exact cdf and certified Fourier coefficients, simultaneous-orbit empirical
// statistics, convergence diagnostics, zoom sceneries, lattice convolution
// dimensions, density scans, and the experiment-runner plumbing.

#include "eqlab/version.hpp"
#include "eqlab/errors.hpp"
#include "eqlab/rng.hpp"
#include "eqlab/exact_num.hpp"
#include "eqlab/measures.hpp"
#include "eqlab/orbits.hpp"
#include "eqlab/equidist.hpp"
#include "eqlab/scenery.hpp"
#include "eqlab/convdim.hpp"
#include "eqlab/density_checks.hpp"
#include "eqlab/measure_io.hpp"
#include "eqlab/cli.hpp"
#include "eqlab/verify.hpp"

#endif
