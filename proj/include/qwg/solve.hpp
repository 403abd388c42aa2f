#pragma once

#include <cstdint>
#include <vector>

#include "qwg/operator.hpp"

namespace qwg {

enum class Preconditioner { none, diagonal, incomplete_factor };

struct SolveOptions {
  double eig_tol = 1e-10;  // eigenpair residual |A phi - lambda phi| with |phi| = 1
  double lin_tol = 1e-12;  // relative linear-solver residual |A x - f| / |f|
  int max_iter = 600;      // outer eigeniteration cap
  int cg_max_iter = 20000;
  int block_size = 4;
  Preconditioner preconditioner = Preconditioner::incomplete_factor;
  std::uint64_t seed = 0x6b5d742ad34889c1ull;  // deterministic block start
};

struct Eigenpair {
  double lambda = 0.0;
  Field phi;                  // normalized, sign-fixed so the sum is positive
  double residual_norm = 0.0; // re-checked with a fresh operator application
  int iterations = 0;
  bool near_threshold = false;  // within 1e-6 of the essential-spectrum threshold;
                                // possibly a truncation artifact
};

// first Dirichlet eigenvalue of the cross-section
double essential_spectrum_threshold(const GuideSpec& spec);
double essential_spectrum_threshold(const Grid& g);

// m lowest eigenpairs, ascending, via blocked preconditioned Rayleigh-quotient
// minimization; throws SolveError with the best residual on non-convergence
std::vector<Eigenpair> eigenpairs(const DiscreteOperator& A, int m, const SolveOptions& opts);
Eigenpair ground_eigenpair(const DiscreteOperator& A, const SolveOptions& opts);

// conjugate gradients with true-residual refresh; f = 0 returns exact zeros
Field poisson_solve(const DiscreteOperator& A, const Field& f, const SolveOptions& opts);

// full dense symmetric eigendecomposition; verification only, refuses large grids
std::vector<Eigenpair> dense_oracle(const DiscreteOperator& A);

}  // namespace qwg
