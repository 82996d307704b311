#include "qsat/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qsat {

std::string to_string(Filter f) {
  switch (f) {
    case Filter::sat: return "sat";
    case Filter::unsat: return "unsat";
    case Filter::mixed: return "mixed";
  }
  return "?";
}

std::string to_string(GridColor c) {
  switch (c) {
    case GridColor::blue: return "blue";
    case GridColor::red: return "red";
    case GridColor::green: return "green";
    case GridColor::yellow: return "yellow";
  }
  return "?";
}

Filter filter_from_string(const std::string& s) {
  if (s == "sat") return Filter::sat;
  if (s == "unsat") return Filter::unsat;
  if (s == "mixed") return Filter::mixed;
  throw std::invalid_argument("unknown filter: " + s);
}

std::map<int, double> median_by_size(const std::vector<ExperimentRecord>& records,
                                     Algorithm algorithm, Metric metric,
                                     Filter filter) {
  std::map<int, std::vector<double>> groups;
  for (const ExperimentRecord& r : records) {
    if (filter == Filter::sat && !r.satisfiable) continue;
    if (filter == Filter::unsat && r.satisfiable) continue;
    const auto v = metric_value(r, algorithm, metric);
    if (v) groups[r.n].push_back(*v);
  }
  if (groups.empty())
    throw EmptyGroup("no " + to_string(algorithm) + "/" + to_string(metric) +
                     " values after filter " + to_string(filter));
  std::map<int, double> medians;
  for (auto& [n, values] : groups) {
    std::sort(values.begin(), values.end());
    const std::size_t half = values.size() / 2;
    medians[n] = values.size() % 2 == 1
                     ? values[half]
                     : 0.5 * (values[half - 1] + values[half]);
  }
  return medians;
}

ScalingFit fit_log2_linear(const std::map<int, double>& points) {
  std::set<int> distinct;
  for (const auto& [n, v] : points) {
    distinct.insert(n);
    if (!(v > 0))
      throw std::domain_error("log2 fit needs positive values, got " +
                              std::to_string(v) + " at n=" + std::to_string(n));
  }
  if (distinct.size() < 2)
    throw Underdetermined("need at least two distinct n to fit a slope");

  Eigen::MatrixXd design(points.size(), 2);
  Eigen::VectorXd rhs(points.size());
  int row = 0;
  for (const auto& [n, v] : points) {
    design(row, 0) = static_cast<double>(n);
    design(row, 1) = 1.0;
    rhs(row) = std::log2(v);
    ++row;
  }
  const Eigen::Vector2d beta =
      design.colPivHouseholderQr().solve(rhs);
  ScalingFit fit;
  fit.slope = beta(0);
  fit.intercept = beta(1);
  return fit;
}

namespace {

double slope_of(const std::map<Algorithm, ScalingFit>& fits, Algorithm a) {
  const auto it = fits.find(a);
  if (it == fits.end())
    throw MissingFit("no fit for algorithm " + to_string(a));
  return it->second.slope;
}

}  // namespace

GridColor classify_cell(const std::map<Algorithm, ScalingFit>& fits) {
  const double sc = slope_of(fits, Algorithm::classical);
  const double sd = slope_of(fits, Algorithm::detection);
  const double ss = slope_of(fits, Algorithm::search);
  const double sg = slope_of(fits, Algorithm::grover);
  if (sc <= sd && sc <= ss && sc <= sg) return GridColor::blue;
  if (ss < sc && ss <= sg) return GridColor::green;
  if (sg < sc) return GridColor::yellow;
  return GridColor::red;
}

GridColor classify_cell_capacity(const std::map<Algorithm, double>& capacity) {
  const auto at = [&](Algorithm a) {
    const auto it = capacity.find(a);
    if (it == capacity.end())
      throw MissingFit("no capacity for algorithm " + to_string(a));
    return it->second;
  };
  const double nc = at(Algorithm::classical);
  const double nd = at(Algorithm::detection);
  const double ns = at(Algorithm::search);
  const double ng = at(Algorithm::grover);
  if (nc >= nd && nc >= ns && nc >= ng) return GridColor::blue;
  if (ns > nc && ns >= ng) return GridColor::green;
  if (ng > nc) return GridColor::yellow;
  return GridColor::red;
}

GridReport build_grid(const std::vector<ExperimentRecord>& records, GridBasis basis,
                      Metric metric, Filter filter, const CostModelSpec& cost) {
  if (metric == Metric::runtime_s)
    throw std::invalid_argument("grid metric must be queries, tdepth or tcount");
  std::set<std::pair<int, double>> cells;
  for (const ExperimentRecord& r : records) cells.insert({r.k, r.beta});

  GridReport report;
  report.basis = basis;
  report.metric = metric;
  report.filter = filter;
  const Algorithm quantum[] = {Algorithm::detection, Algorithm::search,
                               Algorithm::grover};
  for (const auto& [k, beta] : cells) {
    std::vector<ExperimentRecord> cell_records;
    for (const ExperimentRecord& r : records)
      if (r.k == k && (r.beta == beta || (std::isinf(r.beta) && std::isinf(beta))))
        cell_records.push_back(r);

    GridCell cell;
    cell.k = k;
    cell.beta = beta;
    cell.basis = basis;
    ScalingFit classical = fit_log2_linear(
        median_by_size(cell_records, Algorithm::classical, Metric::runtime_s, filter));
    classical.metric = Metric::runtime_s;
    classical.algorithm = Algorithm::classical;
    cell.fits[Algorithm::classical] = classical;
    for (Algorithm a : quantum) {
      ScalingFit fit =
          fit_log2_linear(median_by_size(cell_records, a, metric, filter));
      fit.metric = metric;
      fit.algorithm = a;
      cell.fits[a] = fit;
    }

    if (basis == GridBasis::scaling) {
      cell.color = classify_cell(cell.fits);
    } else {
      std::map<Algorithm, double> capacity;
      for (const auto& [a, fit] : cell.fits) {
        const std::optional<double> cq =
            a == Algorithm::classical ? std::nullopt
                                      : std::optional<double>(cost.measurement_time_s);
        try {
          capacity[a] = largest_in_one_day(fit, cq);
        } catch (const UnboundedCapacity&) {
          capacity[a] = std::numeric_limits<double>::infinity();
        }
      }
      cell.color = classify_cell_capacity(capacity);
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

namespace {

std::string beta_label(double beta) {
  if (std::isinf(beta)) return "inf";
  std::ostringstream s;
  s << beta;
  return s.str();
}

const char* color_hex(GridColor c) {
  switch (c) {
    case GridColor::blue: return "#4878cf";
    case GridColor::red: return "#d65f5f";
    case GridColor::green: return "#6acc65";
    case GridColor::yellow: return "#e8d84a";
  }
  return "#000000";
}

}  // namespace

std::string grid_to_csv(const GridReport& report) {
  std::ostringstream out;
  out << "k,beta,algorithm,slope,intercept,color\n";
  out.precision(10);
  for (const GridCell& cell : report.cells)
    for (const auto& [a, fit] : cell.fits)
      out << cell.k << ',' << beta_label(cell.beta) << ',' << to_string(a) << ','
          << fit.slope << ',' << fit.intercept << ',' << to_string(cell.color)
          << '\n';
  return out.str();
}

std::string grid_to_svg(const GridReport& report) {
  std::set<int> ks;
  std::set<double> betas;
  for (const GridCell& c : report.cells) {
    ks.insert(c.k);
    betas.insert(c.beta);
  }
  const int cell_w = 64, cell_h = 28, left = 48, top = 36;
  const int width = left + cell_w * static_cast<int>(betas.size()) + 8;
  const int height = top + cell_h * static_cast<int>(ks.size()) + 8;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<text x=\"6\" y=\"16\" font-size=\"12\">k \\\\ beta</text>\n";
  int col = 0;
  for (double beta : betas) {
    svg << "<text x=\"" << left + col * cell_w + cell_w / 2 << "\" y=\"" << top - 8
        << "\" font-size=\"12\" text-anchor=\"middle\">" << beta_label(beta)
        << "</text>\n";
    ++col;
  }
  int rowi = 0;
  for (int k : ks) {
    svg << "<text x=\"" << left - 10 << "\" y=\"" << top + rowi * cell_h + cell_h / 2 + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << k << "</text>\n";
    ++rowi;
  }
  for (const GridCell& cell : report.cells) {
    const int r = static_cast<int>(std::distance(ks.begin(), ks.find(cell.k)));
    const int c =
        static_cast<int>(std::distance(betas.begin(), betas.find(cell.beta)));
    svg << "<rect x=\"" << left + c * cell_w << "\" y=\"" << top + r * cell_h
        << "\" width=\"" << cell_w - 2 << "\" height=\"" << cell_h - 2
        << "\" fill=\"" << color_hex(cell.color) << "\" stroke=\"#333\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string grid_to_markdown(const GridReport& report) {
  std::ostringstream out;
  out << "## Grid (" << (report.basis == GridBasis::scaling ? "scaling" : "one_day")
      << ", metric " << to_string(report.metric) << ", filter "
      << to_string(report.filter) << ")\n\n";
  out << "| k | beta | classical | detection | search | grover | color |\n";
  out << "|---|------|-----------|-----------|--------|--------|-------|\n";
  const auto fmt = [](const ScalingFit& f) {
    std::ostringstream s;
    s.precision(3);
    s << f.slope << "n " << (f.intercept < 0 ? "- " : "+ ")
      << std::abs(f.intercept);
    return s.str();
  };
  for (const GridCell& cell : report.cells) {
    out << "| " << cell.k << " | " << beta_label(cell.beta) << " | "
        << fmt(cell.fits.at(Algorithm::classical)) << " | "
        << fmt(cell.fits.at(Algorithm::detection)) << " | "
        << fmt(cell.fits.at(Algorithm::search)) << " | "
        << fmt(cell.fits.at(Algorithm::grover)) << " | " << to_string(cell.color)
        << " |\n";
  }
  return out.str();
}

}  // namespace qsat
