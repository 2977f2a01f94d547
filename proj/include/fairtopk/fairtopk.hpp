#pragma once

// Statistical group-fairness auditing for top-k rankings: finite-population
// null models of fair selection, Monte Carlo adjusted significance levels for
// families of dependent prefix tests, a probabilistic fairness score, and
// minimal re-ranking of failing rankings.

// report.hpp (JSON documents) and cli.hpp (subcommand driver) are not pulled
// in here: they need the vendored json.hpp / CLI11.hpp on the include path

#include "fairtopk/audit.hpp"
#include "fairtopk/csv.hpp"
#include "fairtopk/distribution.hpp"
#include "fairtopk/math.hpp"
#include "fairtopk/population.hpp"
#include "fairtopk/rerank.hpp"
#include "fairtopk/rng.hpp"
#include "fairtopk/sampling.hpp"
