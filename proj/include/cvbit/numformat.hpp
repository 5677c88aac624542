#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cvbit {

/// Locale-independent formatting with 12 significant digits (CSV contract).
std::string g12(double v);

std::string csv_row(const std::vector<std::string>& fields);

} // namespace cvbit
