#include <iomanip>
#include <ostream>

#include "scenario.hpp"

namespace phqm::cli {

void emit_plotdata(const ResultRecord& r, const std::string& kind, std::ostream& os) {
  const PlotSeries* ps = nullptr;
  for (const auto& p : r.plots)
    if (kind.empty() || p.kind == kind) {
      ps = &p;
      break;
    }
  if (!ps || ps->rows.empty())
    throw Error(Errc::NothingToPlot, kind.empty() ? "result has no sampled curves" : "no curve named '" + kind + "'");
  for (std::size_t i = 0; i < ps->columns.size(); ++i) os << (i ? "," : "") << ps->columns[i];
  os << '\n' << std::setprecision(17);
  for (const auto& row : ps->rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

}  // namespace phqm::cli
