#pragma once

// Forward declaration of nlohmann::json so headers stay light.
#include <nlohmann/json_fwd.hpp>
