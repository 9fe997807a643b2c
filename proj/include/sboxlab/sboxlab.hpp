#pragma once

#include "sboxlab/anf.hpp"
#include "sboxlab/bundled.hpp"
#include "sboxlab/errors.hpp"
#include "sboxlab/gf.hpp"
#include "sboxlab/heatmap.hpp"
#include "sboxlab/metrics.hpp"
#include "sboxlab/random.hpp"
#include "sboxlab/rational.hpp"
#include "sboxlab/report.hpp"
#include "sboxlab/sbox.hpp"
#include "sboxlab/search.hpp"
#include "sboxlab/spn.hpp"
