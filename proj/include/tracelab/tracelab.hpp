#pragma once

#include "tracelab/charsum.hpp"
#include "tracelab/class_function.hpp"
#include "tracelab/cyclo.hpp"
#include "tracelab/error.hpp"
#include "tracelab/field.hpp"
#include "tracelab/green.hpp"
#include "tracelab/induce.hpp"
#include "tracelab/lemmas.hpp"
#include "tracelab/matrix.hpp"
#include "tracelab/suite.hpp"
#include "tracelab/torus.hpp"
#include "tracelab/verify.hpp"
#include "tracelab/version.hpp"
#include "tracelab/weyl.hpp"
