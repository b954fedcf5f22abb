#pragma once

#include "mds/arith.hpp"
#include "mds/coefficients.hpp"
#include "mds/core.hpp"
#include "mds/expr.hpp"
#include "mds/io.hpp"
#include "mds/momentlab.hpp"
#include "mds/series.hpp"
#include "mds/system.hpp"
#include "mds/variety.hpp"
