#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace isanneal {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
double integrate_adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol = 1e-10, int max_depth = 48);

/// One row of a tabulated schedule.
struct SchedulePoint {
  double s;
  double omega;
  double delta;
};

/// Annealing profile over scaled time s in [0, 1]: Rabi frequency Omega(s),
/// detuning Delta(s), and the stated bounds Omega_max >= sup|Omega|,
/// Delta_max >= sup|Delta| and Lipschitz constant K of Omega.
class Schedule {
 public:
  using Profile = std::function<double(double)>;

  /// `delta_integral(a, b)` may be empty, in which case integrals of Delta are
  /// evaluated by adaptive Simpson quadrature (tolerance 1e-10).
  Schedule(std::string name, Profile omega, Profile delta, double omega_max, double delta_max,
           double lipschitz_k, std::function<double(double, double)> delta_integral = {});

  /// Omega = sin(pi s), Delta = cos(pi s); Omega_max = Delta_max = 1, K = pi.
  static Schedule fig4();
  /// Omega = 1, Delta = 0; Omega_max = 1, Delta_max = 0, K = 0.
  static Schedule fig3();
  static Schedule constant(double omega, double delta);
  /// Piecewise-linear interpolation through the points (sorted by s, covering
  /// [0, 1]); bounds are taken from the nodes, K from the steepest Omega segment.
  static Schedule tabulated(std::vector<SchedulePoint> points);

  double omega(double s) const { return omega_(s); }
  double delta(double s) const { return delta_(s); }

  /// Integral of Delta over [a, b] (b < a allowed).
  double delta_integral(double a, double b) const;
  double delta_integral(double s) const { return delta_integral(0.0, s); }

  double omega_max() const noexcept { return omega_max_; }
  double delta_max() const noexcept { return delta_max_; }
  double lipschitz_k() const noexcept { return lipschitz_k_; }
  const std::string& name() const noexcept { return name_; }

  /// True when Delta is nonzero somewhere and not constant on a sample grid.
  bool delta_varies(int samples = 1001) const;

 private:
  std::string name_;
  Profile omega_;
  Profile delta_;
  double omega_max_;
  double delta_max_;
  double lipschitz_k_;
  std::function<double(double, double)> delta_integral_;
};

/// "fig4", "fig3", or "constant:<omega>,<delta>". Throws DomainError otherwise.
Schedule builtin_schedule(std::string_view spec);

/// Whitespace- or comma-separated "s omega delta" rows; '#' comments allowed.
std::vector<SchedulePoint> read_schedule_table(std::istream& in);
Schedule read_schedule_file(const std::string& path);

}  // namespace isanneal
