#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "argocast/date.hpp"

namespace argocast::svg {

struct LineSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<Date, double>> points;
};

struct Panel {
  std::string title;
  std::vector<LineSeries> series;
};

// Stacked line-chart panels sharing one legend; x axis is calendar time.
void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::vector<Panel>& panels);

}  // namespace argocast::svg
