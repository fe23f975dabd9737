#ifndef MRL_MRL_HPP
#define MRL_MRL_HPP

#include "mrl/analytics.hpp"
#include "mrl/dataset_io.hpp"
#include "mrl/distributions.hpp"
#include "mrl/empirical.hpp"
#include "mrl/exp_weibull.hpp"
#include "mrl/gibbs.hpp"
#include "mrl/grid.hpp"
#include "mrl/mat2.hpp"
#include "mrl/mixture.hpp"
#include "mrl/quad.hpp"
#include "mrl/rng.hpp"
#include "mrl/simulate.hpp"
#include "mrl/special.hpp"

#endif
