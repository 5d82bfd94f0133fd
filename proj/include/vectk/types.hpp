#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vectk {

using cxd = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using dvec = Eigen::VectorXd;

// Every failure mode the library reports.  The numeric grouping matters for
// the C API: codes map onto exit classes (verdict failure vs. input error).
enum class errc {
  ok = 0,
  // domain verdicts (CLI exit 1)
  verification_failed,
  obstructed,
  no_gap,
  incompatible_section,
  inconsistent_index,
  // input / precondition errors (CLI exit 2)
  not_hermitian,
  cutoff_on_spectrum,
  ambient_mismatch,
  degree_out_of_range,
  not_a_cocycle,
  not_projectively_flat,
  irrational_phase,
  not_closed_surface,
  shape_mismatch,
  twist_mismatch,
  cover_mismatch,
  embedding_too_small,
  unknown_scenario,
  bad_input,
  internal,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

// Numerical knobs shared across modules.  Defaults match double-precision
// eigensolves on fibers of dimension <= 64.
struct tolerances {
  double eps_herm = 1e-9;    // Hermitian symmetry defect
  double eps_orth = 1e-9;    // orthonormality defect
  double eps_eig = 1e-9;     // eigenresidual
  double gap_tol = 1e-6;     // half-width of the exclusion zone around spectra
  double eps_doteq = 1e-8;   // low-spectrum agreement for the doteq relation
  double eps_scalar = 1e-8;  // scalar-matrix recognition in dd cocycles
  double eps_compat = 1e-8;  // twisted-family compatibility
  double support_tol = 1e-6; // singular-value threshold for support
  double lipschitz_bound = 0.0; // spectra jump diagnostic; 0 disables
  int q_max = 64;            // max denominator for rational phase recognition
  int jobs = 1;              // worker threads for samplewise loops
};

constexpr double kMuInfinite = std::numeric_limits<double>::infinity();

}  // namespace vectk
