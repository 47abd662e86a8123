#pragma once

#include "oatsq/analytics.hpp"
#include "oatsq/closed_form.hpp"
#include "oatsq/errors.hpp"
#include "oatsq/model.hpp"
#include "oatsq/optimize.hpp"
#include "oatsq/oracle.hpp"
#include "oatsq/polar_complex.hpp"
#include "oatsq/squeezing.hpp"
