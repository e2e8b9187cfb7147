#pragma once

#include "hurstlab/acf.hpp"
#include "hurstlab/asymptotics.hpp"
#include "hurstlab/error.hpp"
#include "hurstlab/estimators.hpp"
#include "hurstlab/io.hpp"
#include "hurstlab/method.hpp"
#include "hurstlab/normal.hpp"
#include "hurstlab/random.hpp"
#include "hurstlab/signal.hpp"
#include "hurstlab/simulation.hpp"
#include "hurstlab/stats.hpp"
#include "hurstlab/synthesis.hpp"
#include "hurstlab/transform.hpp"
#include "hurstlab/wavelets.hpp"
