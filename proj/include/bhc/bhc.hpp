#pragma once

#include "bhc/checks.hpp"
#include "bhc/continuation.hpp"
#include "bhc/dataio.hpp"
#include "bhc/dca.hpp"
#include "bhc/errors.hpp"
#include "bhc/init.hpp"
#include "bhc/matrix.hpp"
#include "bhc/model_one.hpp"
#include "bhc/model_two.hpp"
#include "bhc/postprocess.hpp"
#include "bhc/rng.hpp"
#include "bhc/smoothing.hpp"
