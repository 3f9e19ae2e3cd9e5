#pragma once

#include "convdistill/distill.hpp"
#include "convdistill/errors.hpp"
#include "convdistill/explain.hpp"
#include "convdistill/fourier.hpp"
#include "convdistill/matrix.hpp"
#include "convdistill/numeric.hpp"
#include "convdistill/runtime.hpp"
#include "convdistill/worker_pool.hpp"
