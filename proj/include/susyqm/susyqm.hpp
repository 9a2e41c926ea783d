#pragma once

#include "susyqm/calculus.hpp"
#include "susyqm/eigensolve.hpp"
#include "susyqm/error.hpp"
#include "susyqm/expr.hpp"
#include "susyqm/grid.hpp"
#include "susyqm/io.hpp"
#include "susyqm/pt_twoparam.hpp"
#include "susyqm/qes.hpp"
#include "susyqm/report.hpp"
#include "susyqm/special.hpp"
#include "susyqm/susy1d.hpp"
#include "susyqm/susy2d.hpp"
#include "susyqm/tridiagonal.hpp"
