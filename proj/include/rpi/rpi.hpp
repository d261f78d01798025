#ifndef RPI_RPI_HPP
#define RPI_RPI_HPP

// Umbrella header: exact computation with regulated primitives --
// distributions on the line represented by piecewise-polynomial primitives,
// with exact integrals, norms, products, lattice structure, measures and
// convergence checks.

#include "rpi/algebraic.hpp"
#include "rpi/bv.hpp"
#include "rpi/calculus.hpp"
#include "rpi/convergence.hpp"
#include "rpi/distribution.hpp"
#include "rpi/errors.hpp"
#include "rpi/interval.hpp"
#include "rpi/io.hpp"
#include "rpi/lattice.hpp"
#include "rpi/measure.hpp"
#include "rpi/piecewise.hpp"
#include "rpi/polynomial.hpp"
#include "rpi/product.hpp"
#include "rpi/rational.hpp"
#include "rpi/rpi_version.hpp"
#include "rpi/stieltjes.hpp"
#include "rpi/value.hpp"

#endif  // RPI_RPI_HPP
