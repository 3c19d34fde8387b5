#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinfilm {

/// Time series of per-sample diagnostics with a fixed column schema.
struct RunRecord {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::size_t column(const std::string &name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::out_of_range("RunRecord: no column named '" + name + "'");
  }

  [[nodiscard]] std::vector<double> series(const std::string &name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &r : rows) out.push_back(r[c]);
    return out;
  }

  [[nodiscard]] std::size_t size() const { return rows.size(); }
};

} // namespace thinfilm
