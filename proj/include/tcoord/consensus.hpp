#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tcoord/graph.hpp"

namespace tcoord {

/// Raised when -L_bar is not Hurwitz, which happens exactly when the
/// communication graph lacks a directed spanning tree.
class NotStabilizingError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Coordination gains of the second-order law and the path-following coupling.
struct GainSet {
  double a = 0.0;     // coordination gain
  double b = 0.0;     // damping gain
  double k_pf = 0.0;  // path-following coupling gain
  double eta = 0.0;   // regularizer in the coupling denominator

  /// Field-name + message pairs for every non-positive gain.
  std::vector<std::pair<std::string, std::string>> problems() const;

  bool operator==(const GainSet&) const = default;
};

/// (n-1) x n projection with Q 1 = 0 and Q Q^T = I, built by the standard
/// recursion from Q_2 = [1/sqrt2, -1/sqrt2]. Throws std::invalid_argument for n < 2.
Matrix build_q(int n);

/// L_bar = Q L Q^T. Throws std::invalid_argument on dimension mismatch.
Matrix reduced_laplacian(const Matrix& laplacian, const Matrix& q);

/// Solution of the Lyapunov equation L_bar^T Psi + Psi L_bar = Xi.
struct LyapunovCertificate {
  Matrix xi;
  Matrix psi;
  double residual_norm = 0.0;  // Frobenius norm of L_bar^T Psi + Psi L_bar - Xi
  double psi_min = 0.0;        // smallest eigenvalue of Psi
  double psi_max = 0.0;        // largest eigenvalue of Psi
};

/// Solves the Lyapunov equation through its Kronecker form
/// (I (x) L_bar^T + L_bar^T (x) I) vec(Psi) = vec(Xi).
///
/// Requires every eigenvalue of L_bar to have positive real part
/// (NotStabilizingError otherwise) and Xi symmetric positive definite
/// (std::invalid_argument). Throws std::runtime_error if the Kronecker
/// system is numerically singular or the result is not positive definite.
LyapunovCertificate solve_lyapunov(const Matrix& lbar, const Matrix& xi);

/// Certificate for the graph with Xi = I.
LyapunovCertificate certify_graph(const Digraph& g);

/// Exponential rate estimate (a/b) * lambda_min(Xi) / (3 lambda_max(Psi)).
double convergence_rate(const GainSet& gains, const LyapunovCertificate& cert);

/// Block transform S = [[b I_{n-1}, Q], [0, I_n]] between the coordination
/// error and the (chi, xi_2) coordinates.
Matrix error_transform(double b, int n);

/// ISS gain ||S^-1|| sqrt(max{psi_max, beta/2} / min{psi_min, beta/2}) ||S||.
double kappa1(double b, double beta, const LyapunovCertificate& cert, int n);

/// Inputs of the bound u_bar on the estimation-error forcing term.
///
/// `threshold_c1`/`threshold_c2` are the trigger threshold parameters, not
/// the Psi eigenvalues. `kappa2` is a policy value: its closed form is not
/// computable, so with the default 0 the result is a lower-envelope estimate.
struct UBarInputs {
  GainSet gains;
  int n = 2;
  double kappa1 = 1.0;
  double kappa2 = 0.0;
  double xi0_norm = 0.0;
  double threshold_c1 = 0.0;
  double threshold_c2 = 0.0;
  double rho = 0.0;
  double gamma_ddot_d_max = 0.0;
};

double u_bar(const UBarInputs& in);

/// Spectral norm of the estimation-error system matrix [[0, 1], [0, -b]].
double error_system_norm(double b);

/// Lower bound (1/||A||) ln(1 + c1 ||A|| / u_bar) on consecutive event times
/// of one agent. Throws std::invalid_argument unless all inputs are positive.
double min_inter_event_interval(double b, double c1, double u_bar);

}  // namespace tcoord
