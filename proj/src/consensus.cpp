#include "tcoord/consensus.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace tcoord {

std::vector<std::pair<std::string, std::string>> GainSet::problems() const {
  std::vector<std::pair<std::string, std::string>> out;
  auto check = [&](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) out.emplace_back(name, "gain must be positive and finite");
  };
  check("a", a);
  check("b", b);
  check("k_pf", k_pf);
  check("eta", eta);
  return out;
}

Matrix build_q(int n) {
  if (n < 2) throw std::invalid_argument("build_q: n must be at least 2");
  Matrix q(1, 2);
  q << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  for (int k = 3; k <= n; ++k) {
    Matrix next = Matrix::Zero(k - 1, k);
    const double kk = static_cast<double>(k);
    next(0, 0) = std::sqrt((kk - 1.0) / kk);
    next.block(0, 1, 1, k - 1).setConstant(-1.0 / std::sqrt(kk * (kk - 1.0)));
    next.block(1, 1, k - 2, k - 1) = q;
    q = std::move(next);
  }
  return q;
}

Matrix reduced_laplacian(const Matrix& laplacian, const Matrix& q) {
  if (laplacian.rows() != laplacian.cols() || q.cols() != laplacian.rows() ||
      q.rows() != q.cols() - 1) {
    throw std::invalid_argument("reduced_laplacian: dimension mismatch");
  }
  return q * laplacian * q.transpose();
}

LyapunovCertificate solve_lyapunov(const Matrix& lbar, const Matrix& xi) {
  const Eigen::Index m = lbar.rows();
  if (lbar.cols() != m || xi.rows() != m || xi.cols() != m) {
    throw std::invalid_argument("solve_lyapunov: dimension mismatch");
  }
  if (m == 0) throw std::invalid_argument("solve_lyapunov: empty matrix");
  if ((xi - xi.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, xi.norm())) {
    throw std::invalid_argument("solve_lyapunov: Xi must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> xi_eig(xi, Eigen::EigenvaluesOnly);
  if (xi_eig.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("solve_lyapunov: Xi must be positive definite");
  }
  for (const auto& lambda : spectrum(lbar)) {
    if (!(lambda.real() > 0.0)) {
      throw NotStabilizingError(
          "reduced Laplacian has an eigenvalue with non-positive real part; "
          "the communication graph has no directed spanning tree");
    }
  }

  const Matrix lt = lbar.transpose();
  const Matrix id = Matrix::Identity(m, m);
  Matrix kron(m * m, m * m);
  // Column-major vec: vec(A X) = (I (x) A) vec X, vec(X B) = (B^T (x) I) vec X.
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      kron.block(r * m, c * m, m, m) = id(r, c) * lt + lbar(c, r) * id;
    }
  }
  Eigen::PartialPivLU<Matrix> lu(kron);
  if (!(lu.rcond() > 1e-14)) {
    throw std::runtime_error("solve_lyapunov: Kronecker system is singular");
  }
  const Vector rhs = Eigen::Map<const Vector>(xi.data(), m * m);
  const Vector sol = lu.solve(rhs);

  LyapunovCertificate cert;
  cert.xi = xi;
  Matrix psi = Eigen::Map<const Matrix>(sol.data(), m, m);
  cert.psi = 0.5 * (psi + psi.transpose());
  cert.residual_norm = (lt * cert.psi + cert.psi * lbar - xi).norm();
  Eigen::SelfAdjointEigenSolver<Matrix> psi_eig(cert.psi, Eigen::EigenvaluesOnly);
  cert.psi_min = psi_eig.eigenvalues().minCoeff();
  cert.psi_max = psi_eig.eigenvalues().maxCoeff();
  if (!(cert.psi_min > 0.0)) {
    throw std::runtime_error("solve_lyapunov: solution is not positive definite");
  }
  return cert;
}

LyapunovCertificate certify_graph(const Digraph& g) {
  const Matrix q = build_q(g.size());
  const Matrix lbar = reduced_laplacian(laplacian(g), q);
  return solve_lyapunov(lbar, Matrix::Identity(lbar.rows(), lbar.cols()));
}

double convergence_rate(const GainSet& gains, const LyapunovCertificate& cert) {
  Eigen::SelfAdjointEigenSolver<Matrix> xi_eig(cert.xi, Eigen::EigenvaluesOnly);
  return (gains.a / gains.b) * xi_eig.eigenvalues().minCoeff() / (3.0 * cert.psi_max);
}

Matrix error_transform(double b, int n) {
  Matrix s = Matrix::Zero(2 * n - 1, 2 * n - 1);
  s.topLeftCorner(n - 1, n - 1) = b * Matrix::Identity(n - 1, n - 1);
  s.topRightCorner(n - 1, n) = build_q(n);
  s.bottomRightCorner(n, n).setIdentity();
  return s;
}

double kappa1(double b, double beta, const LyapunovCertificate& cert, int n) {
  const Matrix s = error_transform(b, n);
  Eigen::JacobiSVD<Matrix> svd(s);
  const auto& sigma = svd.singularValues();
  const double norm_s = sigma(0);
  const double norm_s_inv = 1.0 / sigma(sigma.size() - 1);
  const double ratio = std::max(cert.psi_max, beta / 2.0) / std::min(cert.psi_min, beta / 2.0);
  return norm_s_inv * std::sqrt(ratio) * norm_s;
}

double u_bar(const UBarInputs& in) {
  const double an = in.gains.a * in.n;
  const double sqrt_n = std::sqrt(static_cast<double>(in.n));
  const double threshold_term = an * sqrt_n * (in.threshold_c1 + in.threshold_c2);
  const double pf_term = in.gains.k_pf * in.rho;
  return an * in.kappa1 * in.xi0_norm +
         an * in.kappa2 * (threshold_term + pf_term + in.gamma_ddot_d_max) + threshold_term +
         pf_term;
}

double error_system_norm(double b) { return std::sqrt(1.0 + b * b); }

double min_inter_event_interval(double b, double c1, double u_bar) {
  if (!(b > 0.0) || !(c1 > 0.0) || !(u_bar > 0.0)) {
    throw std::invalid_argument("min_inter_event_interval: inputs must be positive");
  }
  const double a_norm = error_system_norm(b);
  return std::log1p(c1 * a_norm / u_bar) / a_norm;
}

}  // namespace tcoord
