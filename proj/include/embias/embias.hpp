#pragma once

// embias: bias metrics for word embeddings (WEAT, MAC, Direct Bias, SAME),
// built-in metric self-checks, and a planted-bias synthetic benchmark.

#include "embias/config.hpp"
#include "embias/diagnostics.hpp"
#include "embias/direct_bias.hpp"
#include "embias/embedding.hpp"
#include "embias/errors.hpp"
#include "embias/mac.hpp"
#include "embias/report.hpp"
#include "embias/rng.hpp"
#include "embias/same.hpp"
#include "embias/similarity.hpp"
#include "embias/synthetic.hpp"
#include "embias/vec.hpp"
#include "embias/version.hpp"
#include "embias/weat.hpp"
