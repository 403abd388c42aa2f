#include "qwg/solve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qwg/errors.hpp"

namespace qwg {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// splitmix64: fixed, platform-independent stream for reproducible block starts
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform_pm1(std::uint64_t& state) {
  return double(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
}

// For the 5/7-point stencil the strict-lower patterns of coupled rows never
// intersect, so zero-fill incomplete Cholesky reduces to one division per
// off-diagonal and one square root per row.
struct Prec {
  Preconditioner kind = Preconditioner::none;
  std::vector<double> inv_diag;
  std::vector<double> lval;
  std::vector<int> lcol;
  std::vector<int> lptr;
  std::vector<double> dinv;  // 1 / L_ii
  std::string note;

  void solve(const double* r, double* z, std::size_t n) const {
    if (kind == Preconditioner::none) {
      std::copy(r, r + n, z);
      return;
    }
    if (kind == Preconditioner::diagonal) {
      for (std::size_t i = 0; i < n; ++i) z[i] = r[i] * inv_diag[i];
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = r[i];
      for (int k = lptr[i]; k < lptr[i + 1]; ++k) s -= lval[k] * z[lcol[k]];
      z[i] = s * dinv[i];
    }
    for (std::size_t i = n; i-- > 0;) {
      const double zi = z[i] * dinv[i];
      z[i] = zi;
      for (int k = lptr[i]; k < lptr[i + 1]; ++k) z[lcol[k]] -= lval[k] * zi;
    }
  }
};

Prec make_diagonal(const DiscreteOperator& A, std::string note) {
  Prec p;
  p.kind = Preconditioner::diagonal;
  p.note = std::move(note);
  const std::size_t n = A.grid.size();
  p.inv_diag.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = A.diag(i);
    p.inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
  }
  return p;
}

Prec make_prec(const DiscreteOperator& A, Preconditioner kind) {
  if (kind == Preconditioner::none) return {};
  if (kind == Preconditioner::diagonal) return make_diagonal(A, "");
  const Grid& g = A.grid;
  const std::size_t n = g.size();
  const int n2 = g.n2(), n3 = g.n3();
  const std::size_t rs = std::size_t(n2) * n3;
  Prec p;
  p.kind = Preconditioner::incomplete_factor;
  p.lptr.assign(n + 1, 0);
  p.dinv.resize(n);
  p.lval.reserve(3 * n);
  p.lcol.reserve(3 * n);
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t i = q / rs, t = q % rs;
    const int j2 = int(t) / n3, j3 = int(t) % n3;
    double off_sq = 0.0;
    auto push = [&](std::size_t col, double a) {
      const double l = a * p.dinv[col];
      p.lval.push_back(l);
      p.lcol.push_back(int(col));
      off_sq += l * l;
    };
    if (i > 0) push(q - rs, -A.cs[i * rs + t]);
    if (j2 > 0) push(q - n3, -A.au2);
    if (j3 > 0) push(q - 1, -A.au3);
    p.lptr[q + 1] = int(p.lval.size());
    const double s = A.diag(q) - off_sq;
    if (!(s > 0.0))
      return make_diagonal(A, "incomplete factorization broke down; using diagonal scaling");
    p.dinv[q] = 1.0 / std::sqrt(s);
  }
  return p;
}

void apply_block(const DiscreteOperator& A, const Mat& x, Mat& y) {
  y.resize(x.rows(), x.cols());
  const auto view = A.view();
  for (int c = 0; c < x.cols(); ++c) kern::apply(view, x.col(c).data(), y.col(c).data());
}

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

double threshold_from_grid(const Grid& g) {
  const double pi = std::numbers::pi;
  if (g.dim == 2) return pi * pi / (g.d3 * g.d3);
  return pi * pi * (1.0 / (g.d2 * g.d2) + 1.0 / (g.d3 * g.d3));
}

Eigenpair finalize_pair(const DiscreteOperator& A, const double* x, int iterations) {
  const std::size_t n = A.grid.size();
  Eigenpair e;
  e.phi = Field(A.grid);
  std::copy(x, x + n, e.phi.v.begin());
  const double nrm = kern::nrm2(e.phi.v.data(), n);
  if (nrm == 0.0) throw SolveError("eigensolver produced a zero vector");
  kern::scal(1.0 / nrm, e.phi.v.data(), n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += e.phi.v[i];
  if (sum < 0.0) kern::scal(-1.0, e.phi.v.data(), n);
  std::vector<double> y(n);
  kern::apply(A.view(), e.phi.v.data(), y.data());
  e.lambda = kern::dot(e.phi.v.data(), y.data(), n);
  kern::axpy(-e.lambda, e.phi.v.data(), y.data(), n);
  e.residual_norm = kern::nrm2(y.data(), n);
  e.iterations = iterations;
  e.near_threshold = std::abs(e.lambda - threshold_from_grid(A.grid)) < 1e-6;
  return e;
}

}  // namespace

double essential_spectrum_threshold(const GuideSpec& spec) {
  const double pi = std::numbers::pi;
  if (spec.dim == 2) return pi * pi / (spec.d * spec.d);
  return pi * pi * (1.0 / (spec.d2 * spec.d2) + 1.0 / (spec.d3 * spec.d3));
}

double essential_spectrum_threshold(const Grid& g) { return threshold_from_grid(g); }

std::vector<Eigenpair> eigenpairs(const DiscreteOperator& A, int m, const SolveOptions& opts) {
  const std::size_t n = A.grid.size();
  if (m < 1) throw ConfigError("eigenpair count must be at least 1");
  if (std::size_t(m) >= n) throw ConfigError("eigenpair count must be below the unknown count");
  if (!(opts.eig_tol > 0.0)) throw ConfigError("solve.eig_tol must be positive");
  const Prec prec = make_prec(A, opts.preconditioner);

  int b = int(std::min<std::size_t>(std::max(opts.block_size, m + 1), n - 1));
  std::uint64_t rng = opts.seed;
  Mat x(n, b);
  for (int c = 0; c < b; ++c)
    for (std::size_t r = 0; r < n; ++r) x(r, c) = uniform_pm1(rng);

  auto orthonormalize = [&](Mat& q) {
    Eigen::HouseholderQR<Mat> f(q);
    q = f.householderQ() * Mat::Identity(q.rows(), q.cols());
  };
  orthonormalize(x);
  Mat ax;
  apply_block(A, x, ax);
  Vec theta;
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(x.transpose() * ax));
    x = x * es.eigenvectors();
    ax = ax * es.eigenvectors();
    theta = es.eigenvalues();
  }

  Mat p(n, 0), ap(n, 0), w, aw;
  double best = std::numeric_limits<double>::infinity();
  int since_improve = 0;
  bool enlarged = false;
  bool converged = false;
  int iter = 0;
  const double loop_tol = 0.35 * opts.eig_tol;

  for (iter = 1; iter <= opts.max_iter; ++iter) {
    if (iter % 10 == 0) apply_block(A, x, ax);  // shed accumulated recombination drift
    Mat r = ax - x * theta.head(x.cols()).asDiagonal();
    double worst = 0.0;
    for (int k = 0; k < m; ++k) worst = std::max(worst, r.col(k).norm() / x.col(k).norm());
    if (worst <= loop_tol) {
      converged = true;
      break;
    }
    if (worst < 0.9999 * best) {
      best = worst;
      since_improve = 0;
    } else if (++since_improve >= 40) {
      // one restart with a wider block, then give the iteration cap a chance
      since_improve = 0;
      if (!enlarged && std::size_t(b + 4) < n) {
        enlarged = true;
        b += 4;
        Mat xl(n, b);
        xl.leftCols(x.cols()) = x;
        for (int c = x.cols(); c < b; ++c)
          for (std::size_t rr = 0; rr < n; ++rr) xl(rr, c) = uniform_pm1(rng);
        x = xl;
        orthonormalize(x);
        apply_block(A, x, ax);
        Eigen::SelfAdjointEigenSolver<Mat> es(sym(x.transpose() * ax));
        x = x * es.eigenvectors();
        ax = ax * es.eigenvectors();
        theta = es.eigenvalues();
        p.resize(n, 0);
        ap.resize(n, 0);
        continue;
      }
    }

    w.resize(n, x.cols());
    for (int k = 0; k < x.cols(); ++k) prec.solve(r.col(k).data(), w.col(k).data(), n);
    int wc = 0;
    for (int k = 0; k < w.cols(); ++k) {
      const double nk = w.col(k).norm();
      if (nk > 0.0) {
        w.col(wc) = w.col(k) / nk;
        ++wc;
      }
    }
    w.conservativeResize(n, wc);
    apply_block(A, w, aw);

    const int bx = int(x.cols()), bp = int(p.cols());
    Mat z(n, bx + wc + bp), az(n, bx + wc + bp);
    z << x, w, p;
    az << ax, aw, ap;

    // whiten the combined basis; directions folded into the span are dropped
    Eigen::SelfAdjointEigenSolver<Mat> gs(sym(z.transpose() * z));
    const Vec gv = gs.eigenvalues();
    const double gmax = gv(gv.size() - 1);
    int keep = 0;
    for (int k = 0; k < gv.size(); ++k)
      if (gv(k) > 1e-12 * gmax) ++keep;
    if (keep < m) throw SolveError("eigensolver subspace degenerated");
    Mat basis(z.cols(), keep);
    int kc = 0;
    for (int k = 0; k < gv.size(); ++k)
      if (gv(k) > 1e-12 * gmax) basis.col(kc++) = gs.eigenvectors().col(k) / std::sqrt(gv(k));

    Eigen::SelfAdjointEigenSolver<Mat> hs(sym(basis.transpose() * (z.transpose() * az) * basis));
    const int nb = std::min<int>(b, keep);
    Mat c = basis * hs.eigenvectors().leftCols(nb);
    Mat cp = c;
    cp.topRows(bx).setZero();
    x = z * c;
    ax = az * c;
    p = z * cp;
    ap = az * cp;
    theta = hs.eigenvalues().head(nb);
    int pc = 0;
    for (int k = 0; k < p.cols(); ++k) {
      const double nk = p.col(k).norm();
      if (nk > 1e-14) {
        p.col(pc) = p.col(k) / nk;
        ap.col(pc) = ap.col(k) / nk;
        ++pc;
      }
    }
    p.conservativeResize(n, pc);
    ap.conservativeResize(n, pc);
  }

  if (!converged) {
    std::ostringstream os;
    os << "eigensolver did not reach tolerance " << opts.eig_tol << " within " << opts.max_iter
       << " iterations; best residual " << best;
    throw SolveError(os.str());
  }

  std::vector<Eigenpair> out;
  out.reserve(m);
  for (int k = 0; k < m; ++k) {
    Eigenpair e = finalize_pair(A, x.col(k).data(), iter);
    if (e.residual_norm > opts.eig_tol) {
      std::ostringstream os;
      os << "eigenpair " << k << " failed the independent residual check: " << e.residual_norm
         << " > " << opts.eig_tol;
      throw SolveError(os.str());
    }
    out.push_back(std::move(e));
  }
  return out;
}

Eigenpair ground_eigenpair(const DiscreteOperator& A, const SolveOptions& opts) {
  return eigenpairs(A, 1, opts)[0];
}

Field poisson_solve(const DiscreteOperator& A, const Field& f, const SolveOptions& opts) {
  if (!(f.grid == A.grid)) throw ConfigError("field grid does not match operator grid");
  if (!(opts.lin_tol > 0.0)) throw ConfigError("solve.lin_tol must be positive");
  const std::size_t n = A.grid.size();
  Field x(A.grid);
  const double normf = kern::nrm2(f.v.data(), n);
  if (normf == 0.0) return x;
  const Prec prec = make_prec(A, opts.preconditioner);
  const auto view = A.view();

  std::vector<double> r = f.v, z(n), p(n), q(n);
  prec.solve(r.data(), z.data(), n);
  p = z;
  double rz = kern::dot(r.data(), z.data(), n);
  std::vector<double> history;
  for (int it = 1; it <= opts.cg_max_iter; ++it) {
    kern::apply(view, p.data(), q.data());
    const double pq = kern::dot(p.data(), q.data(), n);
    if (!(pq > 0.0)) throw SolveError("operator lost positive definiteness along a search direction");
    const double alpha = rz / pq;
    kern::axpy(alpha, p.data(), x.v.data(), n);
    kern::axpy(-alpha, q.data(), r.data(), n);
    double relres = kern::nrm2(r.data(), n) / normf;
    history.push_back(relres);
    const bool refresh = relres <= opts.lin_tol || it % 50 == 0;
    if (refresh) {
      // recurrence drift check: recompute the true residual before trusting it
      kern::apply(view, x.v.data(), q.data());
      r = f.v;
      kern::axpy(-1.0, q.data(), r.data(), n);
      relres = kern::nrm2(r.data(), n) / normf;
      history.back() = relres;
      if (relres <= opts.lin_tol) return x;
      prec.solve(r.data(), z.data(), n);
      p = z;
      rz = kern::dot(r.data(), z.data(), n);
      continue;
    }
    prec.solve(r.data(), z.data(), n);
    const double rz_next = kern::dot(r.data(), z.data(), n);
    const double beta = rz_next / rz;
    rz = rz_next;
    kern::scal(beta, p.data(), n);
    kern::axpy(1.0, z.data(), p.data(), n);
  }
  std::ostringstream os;
  os << "linear solver did not reach tolerance " << opts.lin_tol << " within " << opts.cg_max_iter
     << " iterations; trailing residuals:";
  for (std::size_t i = history.size() >= 5 ? history.size() - 5 : 0; i < history.size(); ++i)
    os << ' ' << history[i];
  throw SolveError(os.str());
}

std::vector<Eigenpair> dense_oracle(const DiscreteOperator& A) {
  const std::size_t n = A.grid.size();
  if (n > 20000) throw ConfigError("dense oracle refuses grids above 20000 unknowns");
  Mat m = Mat::Zero(n, n);
  for_each_entry(A, [&](std::size_t r, std::size_t c, double val) { m(r, c) = val; });
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success) throw SolveError("dense eigendecomposition failed");
  std::vector<Eigenpair> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(finalize_pair(A, es.eigenvectors().col(k).data(), 0));
  return out;
}

}  // namespace qwg
