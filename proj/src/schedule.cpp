#include "isanneal/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <numbers>
#include <sstream>

#include "isanneal/errors.hpp"

namespace isanneal {

namespace {

double simpson_recurse(const std::function<double(double)>& f, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol, int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_adaptive_simpson(f, b, a, tol, max_depth);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

Schedule::Schedule(std::string name, Profile omega, Profile delta, double omega_max,
                   double delta_max, double lipschitz_k,
                   std::function<double(double, double)> delta_integral)
    : name_(std::move(name)),
      omega_(std::move(omega)),
      delta_(std::move(delta)),
      omega_max_(omega_max),
      delta_max_(delta_max),
      lipschitz_k_(lipschitz_k),
      delta_integral_(std::move(delta_integral)) {
  if (!omega_ || !delta_) throw DomainError("schedule profiles must be callable");
  if (!(omega_max_ >= 0.0) || !(delta_max_ >= 0.0) || !(lipschitz_k_ >= 0.0)) {
    throw DomainError("schedule bounds must be nonnegative");
  }
}

Schedule Schedule::fig4() {
  using std::numbers::pi;
  return Schedule(
      "fig4", [](double s) { return std::sin(pi * s); }, [](double s) { return std::cos(pi * s); },
      1.0, 1.0, pi, [](double a, double b) { return (std::sin(pi * b) - std::sin(pi * a)) / pi; });
}

Schedule Schedule::fig3() {
  Schedule s = constant(1.0, 0.0);
  s.name_ = "fig3";
  return s;
}

Schedule Schedule::constant(double omega, double delta) {
  std::ostringstream name;
  name.precision(17);
  name << "constant:" << omega << ',' << delta;
  return Schedule(
      name.str(), [omega](double) { return omega; }, [delta](double) { return delta; },
      std::abs(omega), std::abs(delta), 0.0, [delta](double a, double b) { return delta * (b - a); });
}

Schedule Schedule::tabulated(std::vector<SchedulePoint> points) {
  if (points.size() < 2) throw DomainError("tabulated schedule needs at least two points");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].s > points[i - 1].s)) throw DomainError("schedule s values must increase strictly");
  }
  if (points.front().s > 0.0 || points.back().s < 1.0) {
    throw DomainError("tabulated schedule must cover s in [0, 1]");
  }
  double omega_max = 0.0;
  double delta_max = 0.0;
  double k = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    omega_max = std::max(omega_max, std::abs(points[i].omega));
    delta_max = std::max(delta_max, std::abs(points[i].delta));
    if (i > 0) {
      k = std::max(k, std::abs(points[i].omega - points[i - 1].omega) / (points[i].s - points[i - 1].s));
    }
  }

  auto table = std::make_shared<const std::vector<SchedulePoint>>(std::move(points));
  // Linear interpolation, clamped to the end values outside the table.
  auto interp = [table](double s, double SchedulePoint::*field) {
    const auto& t = *table;
    if (s <= t.front().s) return t.front().*field;
    if (s >= t.back().s) return t.back().*field;
    auto hi = std::upper_bound(t.begin(), t.end(), s,
                               [](double v, const SchedulePoint& p) { return v < p.s; });
    auto lo = hi - 1;
    const double w = (s - lo->s) / (hi->s - lo->s);
    return (1.0 - w) * ((*lo).*field) + w * ((*hi).*field);
  };
  auto omega = [interp](double s) { return interp(s, &SchedulePoint::omega); };
  auto delta = [interp](double s) { return interp(s, &SchedulePoint::delta); };
  // Exact integral of the piecewise-linear detuning from 0 to s.
  auto primitive = [table, delta](double s) {
    if (s <= 0.0) return delta(0.0) * s;
    double acc = 0.0;
    double prev_s = 0.0;
    double prev_d = delta(0.0);
    for (const auto& p : *table) {
      if (p.s <= prev_s) continue;
      if (p.s >= s) break;
      acc += 0.5 * (prev_d + p.delta) * (p.s - prev_s);
      prev_s = p.s;
      prev_d = p.delta;
    }
    return acc + 0.5 * (prev_d + delta(s)) * (s - prev_s);
  };
  return Schedule("tabulated", omega, delta, omega_max, delta_max, k,
                  [primitive](double a, double b) { return primitive(b) - primitive(a); });
}

double Schedule::delta_integral(double a, double b) const {
  if (delta_integral_) return delta_integral_(a, b);
  return integrate_adaptive_simpson(delta_, a, b, 1e-10);
}

bool Schedule::delta_varies(int samples) const {
  const double d0 = delta(0.0);
  bool nonzero = d0 != 0.0;
  bool varies = false;
  for (int i = 1; i < samples; ++i) {
    const double d = delta(static_cast<double>(i) / (samples - 1));
    nonzero = nonzero || d != 0.0;
    varies = varies || std::abs(d - d0) > 1e-12;
  }
  return nonzero && varies;
}

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw DomainError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Schedule builtin_schedule(std::string_view spec) {
  if (spec == "fig4") return Schedule::fig4();
  if (spec == "fig3") return Schedule::fig3();
  constexpr std::string_view prefix = "constant:";
  if (spec.substr(0, prefix.size()) == prefix) {
    const auto args = spec.substr(prefix.size());
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw DomainError("constant schedule needs 'constant:<omega>,<delta>'");
    }
    return Schedule::constant(parse_double(args.substr(0, comma), "omega"),
                              parse_double(args.substr(comma + 1), "delta"));
  }
  throw DomainError("unknown schedule '" + std::string(spec) + "' (expected fig4, fig3 or constant:<omega>,<delta>)");
}

std::vector<SchedulePoint> read_schedule_table(std::istream& in) {
  std::vector<SchedulePoint> points;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    SchedulePoint p{};
    std::string extra;
    if (!(row >> p.s >> p.omega >> p.delta) || (row >> extra)) {
      throw ParseError(lineno, "expected 's omega delta'");
    }
    points.push_back(p);
  }
  return points;
}

Schedule read_schedule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open schedule file '" + path + "'");
  try {
    return Schedule::tabulated(read_schedule_table(in));
  } catch (const DomainError& err) {
    throw ParseError(0, err.what());
  }
}

}  // namespace isanneal
