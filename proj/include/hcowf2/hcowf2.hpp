#pragma once

#include "hcowf2/analysis.hpp"
#include "hcowf2/bitvec.hpp"
#include "hcowf2/cache.hpp"
#include "hcowf2/characteristic.hpp"
#include "hcowf2/circuit.hpp"
#include "hcowf2/clause.hpp"
#include "hcowf2/cnf.hpp"
#include "hcowf2/digest.hpp"
#include "hcowf2/encoding.hpp"
#include "hcowf2/errors.hpp"
#include "hcowf2/function_description.hpp"
#include "hcowf2/inversion.hpp"
#include "hcowf2/kv.hpp"
#include "hcowf2/net.hpp"
#include "hcowf2/rng.hpp"
#include "hcowf2/sat.hpp"
#include "hcowf2/session.hpp"
#include "hcowf2/wire.hpp"
