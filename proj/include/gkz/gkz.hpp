#pragma once

#include "gkz/commands.hpp"
#include "gkz/contour.hpp"
#include "gkz/exact.hpp"
#include "gkz/integrator.hpp"
#include "gkz/lattice.hpp"
#include "gkz/moment_table.hpp"
#include "gkz/multi_index.hpp"
#include "gkz/operators.hpp"
#include "gkz/oracle.hpp"
#include "gkz/parallel.hpp"
#include "gkz/quadrature.hpp"
#include "gkz/report.hpp"
#include "gkz/support.hpp"
#include "gkz/verifier.hpp"
