#pragma once

#include "ggmdl/anomaly.hpp"
#include "ggmdl/codec.hpp"
#include "ggmdl/completion.hpp"
#include "ggmdl/errors.hpp"
#include "ggmdl/eval.hpp"
#include "ggmdl/glasso.hpp"
#include "ggmdl/graph.hpp"
#include "ggmdl/io.hpp"
#include "ggmdl/matrix.hpp"
#include "ggmdl/mdl.hpp"
#include "ggmdl/rng.hpp"
#include "ggmdl/serialize.hpp"
#include "ggmdl/synthetic.hpp"
#include "ggmdl/version.hpp"
