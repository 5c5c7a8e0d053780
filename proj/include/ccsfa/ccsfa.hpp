#pragma once

#include "ccsfa/errors.hpp"
#include "ccsfa/model.hpp"
#include "ccsfa/contour.hpp"
#include "ccsfa/actions.hpp"
#include "ccsfa/saddle.hpp"
#include "ccsfa/amplitude.hpp"
#include "ccsfa/hqa.hpp"
#include "ccsfa/oracle.hpp"
#include "ccsfa/scan.hpp"
