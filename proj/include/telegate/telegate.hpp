#pragma once

#include "telegate/error.hpp"
#include "telegate/unitary.hpp"
#include "telegate/statevector.hpp"
#include "telegate/gate_model.hpp"
#include "telegate/protocol.hpp"
#include "telegate/executor.hpp"
#include "telegate/resources.hpp"
#include "telegate/verifier.hpp"
#include "telegate/scenario.hpp"
#include "telegate/report.hpp"
