#include "qwg/grid.hpp"

#include "qwg/errors.hpp"

namespace qwg {

Grid Grid::make(const GuideSpec& spec, int n_s, int n_u) {
  if (spec.dim != 2 && spec.dim != 3) throw ConfigError("guide.dim must be 2 or 3");
  if (spec.L <= 0.0) throw ConfigError("guide.L must be positive");
  if (n_s < 3) throw ConfigError("grid.n_s must be at least 3");
  if (n_u < 3 || n_u % 2 == 0)
    throw ConfigError("grid.n_u must be odd and at least 3 so the centerline is interior");
  Grid g;
  g.dim = spec.dim;
  g.n_s = n_s;
  g.n_u = n_u;
  g.L = spec.L;
  g.ds = 2.0 * spec.L / (n_s + 1.0);
  if (spec.dim == 2) {
    if (spec.d <= 0.0) throw ConfigError("guide.d must be positive");
    g.d2 = 0.0;
    g.d3 = spec.d;
    g.du2 = 0.0;
    g.du3 = spec.d / (n_u + 1.0);
  } else {
    if (spec.d2 <= 0.0 || spec.d3 <= 0.0) throw ConfigError("guide.d2/d3 must be positive");
    g.d2 = spec.d2;
    g.d3 = spec.d3;
    g.du2 = spec.d2 / (n_u + 1.0);
    g.du3 = spec.d3 / (n_u + 1.0);
  }
  return g;
}

}  // namespace qwg
