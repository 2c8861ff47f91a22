#pragma once

#include "dressed_modes/boundary.hpp"
#include "dressed_modes/config.hpp"
#include "dressed_modes/dispersive.hpp"
#include "dressed_modes/errors.hpp"
#include "dressed_modes/io.hpp"
#include "dressed_modes/jc_reference.hpp"
#include "dressed_modes/multimode.hpp"
#include "dressed_modes/multiqubit.hpp"
#include "dressed_modes/parallel.hpp"
#include "dressed_modes/params.hpp"
#include "dressed_modes/resonator.hpp"
#include "dressed_modes/spectrum.hpp"
#include "dressed_modes/validation.hpp"
#include "dressed_modes/wedge.hpp"
