#pragma once

#include "revolve/action.hpp"
#include "revolve/cost.hpp"
#include "revolve/error.hpp"
#include "revolve/revolver.hpp"
#include "revolve/schedule.hpp"
#include "revolve/serialize.hpp"
#include "revolve/storage.hpp"
#include "revolve/validate.hpp"
