#pragma once

#include "upade/error.hpp"
#include "upade/polynomial.hpp"
#include "upade/series.hpp"
#include "upade/region.hpp"
#include "upade/pade.hpp"
#include "upade/rational.hpp"
#include "upade/universal.hpp"
#include "upade/io.hpp"
#include "upade/commands.hpp"
