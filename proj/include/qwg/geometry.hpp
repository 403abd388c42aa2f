#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qwg/profiles.hpp"

namespace qwg {

using Vec3 = std::array<double, 3>;

struct GuideSpec {
  int dim = 2;
  double d = 1.0;            // 2D strip width; cross-section is (-d/2, d/2)
  double d2 = 1.0, d3 = 1.0; // 3D rectangle edge lengths
  double L = 15.0;           // truncation half-length: s in [-L, L]
  TorsionSpec torsion;       // 3D only
  // radius of the smallest ball containing the cross-section
  double a_omega() const {
    return dim == 2 ? 0.5 * d : std::sqrt(0.25 * d2 * d2 + 0.25 * d3 * d3);
  }
};

struct FrameSample {
  double s = 0.0;
  Vec3 Gamma{};            // reference-curve point
  Vec3 e1{}, e2{}, e3{};   // tangent, normal (2D: N), binormal
  Vec3 te2{}, te3{};       // rotated transverse frame (3D)
  double theta = 0.0;
};

struct CurveResult {
  std::vector<FrameSample> samples;
  std::vector<std::string> warnings;
};

struct MetricSample {
  double jacobian = 1.0;  // 2D: 1 - u*gamma(s); 3D: h
  double ds_h = 0.0;      // analytic s-derivative of the jacobian
  double ds2_h = 0.0;
};

struct InjectivityReport {
  bool injective = true;
  double self_approach = 0.0;  // min distance between well-separated cross-sections
};

// reported when the boundary scan finds no qualifying re-approach at all
inline constexpr double kSelfApproachSentinel = 1e30;

// integrates theta_c' = gamma, Gamma' = (cos theta_c, sin theta_c) from Gamma(0) = 0
CurveResult reference_curve_2d(const CurvatureProfile& p, const std::vector<double>& s_samples);
// integrates the moving frame e1' = k e2, e2' = -k e1 + tau e3, e3' = -tau e2, tau = theta'
CurveResult reference_curve_3d(const CurvatureProfile& k, const TorsionSpec& t,
                               const std::vector<double>& s_samples);
FrameSample frame_at(const GuideSpec& spec, const CurvatureProfile& p, double s);
// 2D: Gamma + u*N (u3 must be 0); 3D: Gamma + u*te2 + u3*te3
Vec3 map_to_guide(const GuideSpec& spec, const CurvatureProfile& p, double s, double u,
                  double u3 = 0.0);
MetricSample metric_factor(const GuideSpec& spec, const CurvatureProfile& p, double s, double u);
MetricSample metric_factor3(const CurvatureProfile& k, const TorsionSpec& t, double s, double u2,
                            double u3);
// desk-scale boundary-sampling heuristic, not a proof
InjectivityReport check_injectivity(const GuideSpec& spec, const CurvatureProfile& p,
                                    int n_samples = 512);
// signed curvature recovered from the integrated curve by high-order differencing
double signed_curvature_fd(const CurvatureProfile& p, double s, double step = 3e-3);

}  // namespace qwg
