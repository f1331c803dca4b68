#pragma once

#include "iqprob/hermitian_core.hpp"
#include "iqprob/matrix_io.hpp"
#include "iqprob/random.hpp"
#include "iqprob/projector_geometry.hpp"
#include "iqprob/imprecise_probability.hpp"
#include "iqprob/classical_ip.hpp"
#include "iqprob/measurement_models.hpp"
#include "iqprob/spin.hpp"
#include "iqprob/serialize.hpp"
