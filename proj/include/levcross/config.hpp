#pragma once

#include <string>

#include "levcross/model.hpp"

// Plain-text model configuration. INI-style grammar:
//
//   premium_rate = 1.0            # top level
//   [first_arrival]               # then one section per distribution:
//   kind = exponential            # [first_arrival], [inter_arrival], [jump]
//   rate = 1.0
//   [inter_arrival]
//   kind = gamma
//   shape = 2.0
//   rate = 2.0
//   [jump]
//   kind = grid
//   origin = 0.0
//   step = 0.01
//   values = 0.0 1.2 3.4 ...      # whitespace- or comma-separated pdf values
//
// '#' and ';' start comments; keys are case-insensitive.

namespace levcross {

RenewalModel parse_model_config(const std::string& text);
RenewalModel load_model_config(const std::string& path);

}  // namespace levcross
