#pragma once

#include "qbd2d/types.hpp"
#include "qbd2d/kron.hpp"
#include "qbd2d/ctmc.hpp"
#include "qbd2d/model.hpp"
#include "qbd2d/model_io.hpp"
#include "qbd2d/builders.hpp"
#include "qbd2d/qbd.hpp"
#include "qbd2d/stability.hpp"
#include "qbd2d/efficiency.hpp"
#include "qbd2d/simulate.hpp"
