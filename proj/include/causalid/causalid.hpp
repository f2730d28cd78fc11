#pragma once

#include "causalid/error.hpp"
#include "causalid/rational.hpp"
#include "causalid/graph.hpp"
#include "causalid/dsep.hpp"
#include "causalid/dsep_oracle.hpp"
#include "causalid/expr.hpp"
#include "causalid/query.hpp"
#include "causalid/distribution.hpp"
#include "causalid/estimand.hpp"
#include "causalid/scm.hpp"
#include "causalid/docalc.hpp"
#include "causalid/identify.hpp"
#include "causalid/criteria.hpp"
#include "causalid/collection.hpp"
#include "causalid/random.hpp"
#include "causalid/document.hpp"
