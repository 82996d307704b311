#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsat/cost_model.hpp"
#include "qsat/records.hpp"

namespace qsat {

enum class Filter { sat, unsat, mixed };
enum class GridColor { blue, red, green, yellow };
enum class GridBasis { scaling, one_day };

std::string to_string(Filter f);
std::string to_string(GridColor c);
Filter filter_from_string(const std::string& s);

class EmptyGroup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Underdetermined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact median (mean of the two central order statistics for even counts)
// of the metric values per instance size n, after class filtering.
std::map<int, double> median_by_size(const std::vector<ExperimentRecord>& records,
                                     Algorithm algorithm, Metric metric,
                                     Filter filter);

// Ordinary least squares of log2(value) against n.
ScalingFit fit_log2_linear(const std::map<int, double>& points);

// Grid cell color. Precedence: blue when classical scales best (ties go to
// classical), then green when search beats classical and Grover, then
// yellow when Grover beats classical, else red. This is the unique rule
// consistent with the published grids.
GridColor classify_cell(const std::map<Algorithm, ScalingFit>& fits);

// Same precedence applied to one-day capacities, where larger n wins.
GridColor classify_cell_capacity(const std::map<Algorithm, double>& capacity);

struct GridCell {
  int k = 0;
  double beta = 0.0;
  std::map<Algorithm, ScalingFit> fits;
  GridColor color = GridColor::blue;
  GridBasis basis = GridBasis::scaling;
};

struct GridReport {
  GridBasis basis = GridBasis::scaling;
  Metric metric = Metric::queries;
  Filter filter = Filter::mixed;
  std::vector<GridCell> cells;
};

// Per (k, beta) cell: classical fit on measured runtime, quantum fits on
// the requested metric; scaling basis classifies by slopes, one_day by
// largest-instance-in-a-day capacities under the cost spec.
GridReport build_grid(const std::vector<ExperimentRecord>& records, GridBasis basis,
                      Metric metric, Filter filter, const CostModelSpec& cost);

std::string grid_to_csv(const GridReport& report);
std::string grid_to_svg(const GridReport& report);
std::string grid_to_markdown(const GridReport& report);

}  // namespace qsat
