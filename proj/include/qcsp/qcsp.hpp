#pragma once

#include "qcsp/classifier.hpp"
#include "qcsp/complement.hpp"
#include "qcsp/constraint.hpp"
#include "qcsp/error.hpp"
#include "qcsp/evaluator.hpp"
#include "qcsp/expression.hpp"
#include "qcsp/gadgets.hpp"
#include "qcsp/impl_search.hpp"
#include "qcsp/parser.hpp"
#include "qcsp/presets.hpp"
#include "qcsp/solvers.hpp"
