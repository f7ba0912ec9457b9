#pragma once

// Umbrella header. io.hpp needs nlohmann/json (vendor/json.hpp) on the include path.
#include "normsnark/coloring.hpp"
#include "normsnark/error.hpp"
#include "normsnark/extender.hpp"
#include "normsnark/io.hpp"
#include "normsnark/multipole.hpp"
#include "normsnark/oracle.hpp"
#include "normsnark/petersen.hpp"
#include "normsnark/superposition.hpp"
