#pragma once

#include "oscilab/amplitude.hpp"
#include "oscilab/carleson.hpp"
#include "oscilab/carleson_experiments.hpp"
#include "oscilab/config.hpp"
#include "oscilab/cutoff.hpp"
#include "oscilab/decomposition.hpp"
#include "oscilab/dispersive.hpp"
#include "oscilab/error.hpp"
#include "oscilab/expression.hpp"
#include "oscilab/field_io.hpp"
#include "oscilab/grid.hpp"
#include "oscilab/maximal.hpp"
#include "oscilab/norms.hpp"
#include "oscilab/oio.hpp"
#include "oscilab/parallel.hpp"
#include "oscilab/phase.hpp"
#include "oscilab/random.hpp"
#include "oscilab/ratio_table.hpp"
#include "oscilab/runner.hpp"
#include "oscilab/sharpness.hpp"
