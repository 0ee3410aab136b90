#pragma once

#include "lps/bigint.hpp"
#include "lps/bounds.hpp"
#include "lps/errors.hpp"
#include "lps/frey.hpp"
#include "lps/intarith.hpp"
#include "lps/lucas.hpp"
#include "lps/report.hpp"
#include "lps/sieve.hpp"
#include "lps/sieve_cache.hpp"
