#pragma once

#include <string>
#include <vector>

namespace qwg {

struct GuideSpec;

// Closed-form curvature families; derivatives up to order 5 are analytic, so the
// effective potentials downstream carry no numerical-differentiation floor.
struct CurvatureProfile {
  enum class Family { zero, constant_bump, gaussian, sech2 };
  Family family = Family::zero;
  double a = 0.0;      // amplitude (1/length); sup|gamma| = |a| for every family
  double sigma = 1.0;  // length scale; constant_bump: plateau half-length, support 1.5*sigma
  int smoothness_class = 5;
};

// Torsion is specified through the rotation angle theta; tau is exposed as theta'.
struct TorsionSpec {
  enum class Family { constant, ramp_smoothed };
  Family family = Family::constant;
  double theta0 = 0.0;       // constant: theta(s) = theta0
  double theta_max = 0.0;    // ramp_smoothed: theta runs 0 -> theta_max through a tanh ramp
  double sigma_theta = 1.0;  // ramp transition scale
  bool require_quarter_range = false;  // validation demands 0 <= theta <= pi/2
};

struct AssumptionReport {
  double sup_gamma = 0.0;
  bool non_trivially_curved = false;  // advisory: curvature not identically zero
  bool half_width_bound_ok = true;    // d/2 < 1/sup|gamma|
  bool decay_ok = true;               // curvature decays at infinity; true for all families
  bool tube_bound_ok = true;          // 3D: a_omega * sup|k| < 1
  bool theta_range_ok = true;         // checked only when require_quarter_range is set
  std::vector<std::string> notes;
  // hard preconditions for assembly; non_trivially_curved stays advisory
  bool bounds_ok() const { return half_width_bound_ok && tube_bound_ok && theta_range_ok; }
};

// order in 0..5; order above the declared smoothness class is rejected
double eval_profile(const CurvatureProfile& p, double s, int order);
double eval_theta(const TorsionSpec& t, double s, int order);
double sup_gamma(const CurvatureProfile& p);

AssumptionReport validate_assumptions(const CurvatureProfile& p, const GuideSpec& g);

CurvatureProfile::Family profile_family_from_string(const std::string& name);
std::string to_string(CurvatureProfile::Family f);
TorsionSpec::Family torsion_family_from_string(const std::string& name);
std::string to_string(TorsionSpec::Family f);

}  // namespace qwg
