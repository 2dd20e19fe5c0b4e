#pragma once

#include "omitlab/errors.hpp"
#include "omitlab/format.hpp"
#include "omitlab/oracle.hpp"
#include "omitlab/params.hpp"
#include "omitlab/response.hpp"
#include "omitlab/slowlight.hpp"
#include "omitlab/steady_state.hpp"
#include "omitlab/window.hpp"
