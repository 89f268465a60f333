#ifndef MDL_MDL_HPP
#define MDL_MDL_HPP

#include "mdl/codelen.hpp"
#include "mdl/demo.hpp"
#include "mdl/io.hpp"
#include "mdl/models.hpp"
#include "mdl/oracle.hpp"
#include "mdl/regress.hpp"
#include "mdl/rng.hpp"
#include "mdl/select.hpp"
#include "mdl/universal.hpp"

#endif  // MDL_MDL_HPP
