// nlslab.hpp — umbrella header.

#pragma once

#include "nlslab/cli.hpp"
#include "nlslab/config.hpp"
#include "nlslab/core.hpp"
#include "nlslab/dynamics.hpp"
#include "nlslab/experiment.hpp"
#include "nlslab/fft.hpp"
#include "nlslab/field.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/grid.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/io.hpp"
#include "nlslab/nonlinearity.hpp"
#include "nlslab/rescale.hpp"
#include "nlslab/variational.hpp"
#include "nlslab/version.hpp"
