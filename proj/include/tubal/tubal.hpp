#pragma once

// Umbrella header for the tubal completion library. PNG support lives in
// tubal/png_io.hpp and is not pulled in here because it requires libpng.

#include "tubal/cmatrix.hpp"
#include "tubal/complex_svd.hpp"
#include "tubal/errors.hpp"
#include "tubal/fft.hpp"
#include "tubal/harness.hpp"
#include "tubal/metrics.hpp"
#include "tubal/parallel.hpp"
#include "tubal/regularizers.hpp"
#include "tubal/rng.hpp"
#include "tubal/solver.hpp"
#include "tubal/synth.hpp"
#include "tubal/tensor3.hpp"
#include "tubal/tensor_io.hpp"
#include "tubal/tprod.hpp"
#include "tubal/tsvd.hpp"
