#pragma once

// Umbrella header. http_providers.hpp is not included here so that offline
// builds do not pull in the HTTP stack; include it directly when needed.

#include "factagent/claim.hpp"
#include "factagent/config.hpp"
#include "factagent/date.hpp"
#include "factagent/domain_store.hpp"
#include "factagent/errors.hpp"
#include "factagent/evaluation.hpp"
#include "factagent/evidence.hpp"
#include "factagent/gateway.hpp"
#include "factagent/prompts.hpp"
#include "factagent/search.hpp"
#include "factagent/text.hpp"
#include "factagent/tools.hpp"
#include "factagent/workflow.hpp"
