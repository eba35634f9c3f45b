#include "ringlab/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ringlab {

CouplingSpec builtin_coupling(const std::string& id) {
  CouplingSpec spec;
  spec.id = id;
  if (id == "sawtooth") {
    spec.f = [](double x) { return x; };
    spec.f_prime = [](double) { return 1.0; };
    spec.F = [](double x) { return 0.5 * x * x; };
    spec.strictly_increasing = true;
  } else if (id == "half-sine") {
    spec.f = [](double x) { return std::sin(0.5 * x); };
    spec.f_prime = [](double x) { return 0.5 * std::cos(0.5 * x); };
    spec.F = [](double x) { return 2.0 - 2.0 * std::cos(0.5 * x); };
    spec.strictly_increasing = true;
  } else if (id == "tanh-pi") {
    spec.f = [](double x) { return std::tanh(x); };
    spec.f_prime = [](double x) {
      double c = std::cosh(x);
      return 1.0 / (c * c);
    };
    spec.F = [](double x) { return std::log(std::cosh(x)); };
    spec.strictly_increasing = true;
  } else if (id == "sine") {
    // Classical reference coupling; fails strict monotonicity on (-pi, pi).
    spec.f = [](double x) { return std::sin(x); };
    spec.f_prime = [](double x) { return std::cos(x); };
    spec.F = [](double x) { return 1.0 - std::cos(x); };
    spec.strictly_increasing = false;
  } else {
    throw std::invalid_argument("unknown coupling id: " + id);
  }
  return spec;
}

std::vector<std::string> builtin_coupling_ids() {
  return {"sawtooth", "half-sine", "tanh-pi", "sine"};
}

ValidationReport validate_hypotheses(const CouplingSpec& spec, int probes) {
  if (probes < 3) throw std::invalid_argument("validate_hypotheses: probes >= 3");

  ValidationReport rep;
  rep.probes = probes;
  const double h = kTwoPi / probes;

  // Probe grid excludes +-pi by half a step: the hypotheses live on the
  // open interval.
  auto probe = [&](int j) { return -kPi + (j + 0.5) * h; };

  rep.odd_symmetry.pass = true;
  rep.monotonicity.pass = true;
  double worst_odd = 0.0, worst_odd_x = 0.0;
  double min_fp = std::numeric_limits<double>::infinity(), min_fp_x = 0.0;
  for (int j = 0; j < probes; ++j) {
    const double x = probe(j);
    const double odd = std::fabs(spec.f(x) + spec.f(-x));
    if (odd > worst_odd) {
      worst_odd = odd;
      worst_odd_x = x;
    }
    const double fp = spec.f_prime(x);
    if (fp < min_fp) {
      min_fp = fp;
      min_fp_x = x;
    }
  }
  rep.odd_symmetry = {worst_odd < 1e-12, worst_odd, worst_odd_x};
  rep.monotonicity = {min_fp > 0.0, min_fp, min_fp_x};

  // F' = f by central differences, skipping probes too close to +-pi for
  // the stencil to stay inside the open interval.
  const double fd = 1e-5;
  double worst_ad = 0.0, worst_ad_x = 0.0;
  for (int j = 0; j < probes; ++j) {
    const double x = probe(j);
    if (std::fabs(x) > kPi - 2.0 * fd) continue;
    const double deriv = (spec.F(x + fd) - spec.F(x - fd)) / (2.0 * fd);
    const double err = std::fabs(deriv - spec.f(x)) / std::max(1.0, std::fabs(spec.f(x)));
    if (err > worst_ad) {
      worst_ad = err;
      worst_ad_x = x;
    }
  }
  rep.antiderivative = {worst_ad < 1e-6, worst_ad, worst_ad_x};

  // Periodization jump at +-pi: compare the one-sided values.
  rep.jump_magnitude = std::fabs(spec.f(probe(probes - 1)) - spec.f(probe(0)));
  rep.jump_at_pi = rep.jump_magnitude > 1e-6;
  return rep;
}

namespace {

// Monotone cubic Hermite interpolant (Fritsch-Carlson slopes).
class PchipTable {
 public:
  PchipTable(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const size_t m = x_.size();
    if (m < 4) throw std::invalid_argument("coupling table: need at least 4 rows");
    for (size_t i = 1; i < m; ++i) {
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument("coupling table: x must be strictly increasing");
    }
    if (x_.front() > -kPi + 1e-9 || x_.back() < kPi - 1e-9)
      throw std::invalid_argument("coupling table: x must cover [-pi, pi]");

    d_.resize(m);
    std::vector<double> dx(m - 1), slope(m - 1);
    for (size_t i = 0; i + 1 < m; ++i) {
      dx[i] = x_[i + 1] - x_[i];
      slope[i] = (y_[i + 1] - y_[i]) / dx[i];
    }
    for (size_t i = 1; i + 1 < m; ++i) {
      if (slope[i - 1] * slope[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * dx[i] + dx[i - 1];
        const double w2 = dx[i] + 2.0 * dx[i - 1];
        d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
      }
    }
    d_.front() = endpoint_slope(dx[0], dx[1], slope[0], slope[1]);
    d_.back() = endpoint_slope(dx[m - 2], dx[m - 3], slope[m - 2], slope[m - 3]);

    // Exact antiderivative of the interpolant, cumulative over segments.
    cumint_.assign(m, 0.0);
    for (size_t i = 0; i + 1 < m; ++i)
      cumint_[i + 1] = cumint_[i] + segment_integral(i, 1.0);
  }

  double value(double x) const {
    const size_t i = segment(x);
    const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
    const double h = x_[i + 1] - x_[i];
    const double t2 = t * t, t3 = t2 * t;
    return y_[i] * (2 * t3 - 3 * t2 + 1) + h * d_[i] * (t3 - 2 * t2 + t) +
           y_[i + 1] * (-2 * t3 + 3 * t2) + h * d_[i + 1] * (t3 - t2);
  }

  double derivative(double x) const {
    const size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return (y_[i] * (6 * t2 - 6 * t) + h * d_[i] * (3 * t2 - 4 * t + 1) +
            y_[i + 1] * (-6 * t2 + 6 * t) + h * d_[i + 1] * (3 * t2 - 2 * t)) /
           h;
  }

  double integral(double x) const {  // from x_.front() to x
    const size_t i = segment(x);
    const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
    return cumint_[i] + segment_integral(i, t);
  }

 private:
  static double endpoint_slope(double h0, double h1, double s0, double s1) {
    // Three-point one-sided estimate with the usual monotonicity clamps.
    double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d * s0 <= 0.0) return 0.0;
    if (s0 * s1 < 0.0 && std::fabs(d) > 3.0 * std::fabs(s0)) return 3.0 * s0;
    return d;
  }

  size_t segment(double x) const {
    // Evaluation clamps into the covered range.
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<size_t>(it - x_.begin()) - 1;
  }

  // Integral of the Hermite cubic over segment i from t = 0 to t.
  double segment_integral(size_t i, double t) const {
    const double h = x_[i + 1] - x_[i];
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double H00 = 0.5 * t4 - t3 + t;
    const double H10 = 0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2;
    const double H01 = -0.5 * t4 + t3;
    const double H11 = 0.25 * t4 - t3 / 3.0;
    return h * (y_[i] * H00 + h * d_[i] * H10 + y_[i + 1] * H01 + h * d_[i + 1] * H11);
  }

  std::vector<double> x_, y_, d_, cumint_;
};

}  // namespace

CouplingSpec make_tabulated_coupling(std::string id, std::vector<double> x,
                                     std::vector<double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("coupling table: x/y size mismatch");
  auto table = std::make_shared<PchipTable>(std::move(x), std::move(y));

  CouplingSpec spec;
  spec.id = std::move(id);
  spec.f = [table](double v) { return table->value(v); };
  spec.f_prime = [table](double v) { return table->derivative(v); };
  const double F0 = table->integral(0.0);
  spec.F = [table, F0](double v) { return table->integral(v) - F0; };

  // The monotonicity flag is decided by a probe sweep of the interpolant.
  const int probes = 4096;
  double min_fp = std::numeric_limits<double>::infinity();
  for (int j = 0; j < probes; ++j) {
    const double v = -kPi + (j + 0.5) * (kTwoPi / probes);
    min_fp = std::min(min_fp, spec.f_prime(v));
  }
  spec.strictly_increasing = min_fp > 0.0;
  return spec;
}

CouplingSpec load_coupling_table(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open coupling table: " + csv_path);

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("coupling table is empty: " + csv_path);
  // Header line is required; tolerate any column names.

  std::vector<double> xs, ys;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, y;
    if (!(row >> x >> y)) {
      throw std::runtime_error("coupling table: malformed row " +
                               std::to_string(lineno) + " in " + csv_path);
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  return make_tabulated_coupling("table:" + csv_path, std::move(xs), std::move(ys));
}

}  // namespace ringlab
