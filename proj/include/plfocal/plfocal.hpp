#pragma once

#include "plfocal/error.hpp"
#include "plfocal/exactnum.hpp"
#include "plfocal/plmap.hpp"
#include "plfocal/plgroup.hpp"
#include "plfocal/preorders.hpp"
#include "plfocal/plante.hpp"
#include "plfocal/symsets.hpp"
#include "plfocal/realize.hpp"
