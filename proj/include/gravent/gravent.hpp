#pragma once

#include "gravent/constants.hpp"
#include "gravent/config.hpp"
#include "gravent/rng.hpp"
#include "gravent/quadrature.hpp"
#include "gravent/potentials.hpp"
#include "gravent/amplitudes.hpp"
#include "gravent/entanglement.hpp"
#include "gravent/dp_model.hpp"
#include "gravent/scan.hpp"
#include "gravent/io.hpp"
#include "gravent/oracles.hpp"
