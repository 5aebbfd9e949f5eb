#pragma once

#include "plurilab/capacity.hpp"
#include "plurilab/descriptor.hpp"
#include "plurilab/disc_example.hpp"
#include "plurilab/error.hpp"
#include "plurilab/estimates.hpp"
#include "plurilab/global_radial.hpp"
#include "plurilab/measure.hpp"
#include "plurilab/output.hpp"
#include "plurilab/profile.hpp"
#include "plurilab/quadrature.hpp"
#include "plurilab/report.hpp"
#include "plurilab/subextension.hpp"
#include "plurilab/suite.hpp"
