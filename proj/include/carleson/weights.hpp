#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace carleson {

/// A radial weight on the ball, stored as a function of the boundary
/// distance u = 1 - r so that values near the sphere keep full precision.
class RadialWeight {
 public:
  struct Impl;

  /// (1 - r^2)^alpha, alpha > -1.
  static RadialWeight power(double alpha);
  /// ((1 - r) log^2(e / (1 - r)))^{-1}; hat has the closed form 1 / (1 - log(1 - r)).
  static RadialWeight log_rapid();
  /// exp(-1 / (1 - r)).
  static RadialWeight exp_bad();
  /// Piecewise-linear density through (r_i, omega_i), constant past the last node.
  static RadialWeight table(std::vector<double> r, std::vector<double> omega, std::string name);
  /// Arbitrary density given as u -> omega(1 - u).
  static RadialWeight from_density(std::string name, std::function<double(double)> omega_of_u);

  RadialWeight scaled(double lambda) const;

  const std::string& name() const;
  double omega(double r) const;
  double omega_u(double u) const;
  /// hat(r) = integral of omega over [r, 1).
  double hat(double r) const;
  double hat_u(double u) const;
  bool has_closed_form_hat() const;
  /// False when the density failed the integrability check and hat is a truncation.
  bool integrable() const;
  bool is_constant() const;
  /// (c_m, e_m) with omega(1 - u) = scale() * sum c_m u^{e_m}; empty when no such form is known.
  const std::vector<std::pair<double, double>>& power_terms() const;
  double scale() const;

  const Impl& impl() const { return *impl_; }

 private:
  explicit RadialWeight(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  friend RadialWeight associated_weight(const RadialWeight& w);
  std::shared_ptr<const Impl> impl_;
};

/// W(r) = hat(r) / (1 - r).
RadialWeight associated_weight(const RadialWeight& w);

struct ClassifyOptions {
  int grid_size = 400;
  double r_max = 1.0 - 0x1p-20;
  int shells = 20;
  double dhat_threshold = 1e6;
  double regular_threshold = 100.0;
  std::vector<double> k_lattice{2.0, 4.0, 8.0, 16.0};
  double dcheck_margin = 1e-3;
};

struct WeightClassReport {
  std::string weight;
  double dhat_constant = 0.0;
  double dcheck_k = 0.0;
  double dcheck_c = 0.0;
  double regularity_min = 0.0;
  double regularity_max = 0.0;
  bool regularity_diverges = false;
  bool dhat = false;
  bool dcheck = false;
  bool regular = false;
  bool rapid = false;
  bool d = false;
  std::string d_definition = "D = Dhat intersect Dcheck";
  ClassifyOptions options;
  std::vector<double> shell_ratios;
};

WeightClassReport classify(const RadialWeight& w, const ClassifyOptions& opts = {});

}  // namespace carleson
