#pragma once

#include "cnore/deptree.hpp"
#include "cnore/evalstats.hpp"
#include "cnore/extractor.hpp"
#include "cnore/rule_config.hpp"
#include "cnore/rules.hpp"
