#pragma once

#include "spectral_gamma/errors.hpp"
#include "spectral_gamma/groups.hpp"
#include "spectral_gamma/algebra.hpp"
#include "spectral_gamma/fourier.hpp"
#include "spectral_gamma/radial.hpp"
#include "spectral_gamma/powers.hpp"
#include "spectral_gamma/spectra.hpp"
#include "spectral_gamma/parallel.hpp"
#include "spectral_gamma/weights.hpp"
#include "spectral_gamma/region.hpp"
#include "spectral_gamma/holocalc.hpp"
#include "spectral_gamma/ktheory.hpp"
#include "spectral_gamma/ranks.hpp"
#include "spectral_gamma/io.hpp"
#include "spectral_gamma/sampling.hpp"
#include "spectral_gamma/cli.hpp"
