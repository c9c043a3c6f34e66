#pragma once

#include "chlag/errors.hpp"
#include "chlag/model.hpp"
#include "chlag/quadrature.hpp"
#include "chlag/initial_data.hpp"
#include "chlag/lagrangian.hpp"
#include "chlag/nonlocal.hpp"
#include "chlag/evolution.hpp"
#include "chlag/reconstruction.hpp"
#include "chlag/diagnostics.hpp"
#include "chlag/oracle.hpp"
