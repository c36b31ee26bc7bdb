/*
 * Copyright 2026 The permest authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "permest/spectra.hpp"

#include <cmath>
#include <sstream>

namespace permest {
namespace {

// Distinct sub-streams so a generator's spectrum draw and its Ginibre draw
// never overlap for the same seed.
constexpr std::uint64_t kGinibreStream = 0x47494e49;
constexpr std::uint64_t kSpectrumStream = 0x53504543;

std::string entry_location(int i, int j) {
  std::ostringstream oss;
  oss << "entry (" << i << ", " << j << ")";
  return oss.str();
}

}  // namespace

HpsmMatrix validate_hpsm(const CMatrix& raw) {
  if (raw.rows() != raw.cols()) {
    std::ostringstream oss;
    oss << "matrix is " << raw.rows() << "x" << raw.cols();
    raise(Errc::NotSquare, oss.str());
  }
  const int m = static_cast<int>(raw.rows());
  if (m < 1) raise(Errc::NotSquare, "matrix must have dimension at least 1");

  double max_abs = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Complex v = raw(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        raise(Errc::NonFiniteEntry, entry_location(i, j) + " is not finite");
      }
      max_abs = std::max(max_abs, std::abs(v));
    }
  }

  double worst_defect = 0.0;
  int worst_i = 0;
  int worst_j = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double defect = std::abs(raw(i, j) - std::conj(raw(j, i)));
      if (defect > worst_defect) {
        worst_defect = defect;
        worst_i = i;
        worst_j = j;
      }
    }
  }
  if (worst_defect > kHermitianTol * max_abs) {
    std::ostringstream oss;
    oss << "Hermitian defect " << worst_defect << " at " << entry_location(worst_i, worst_j)
        << " exceeds " << kHermitianTol << " * max|entry| = " << kHermitianTol * max_abs;
    raise(Errc::NotHermitian, oss.str());
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> solver(raw, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    raise(Errc::ConvergenceFailure, "eigenvalue iteration did not converge");
  }
  const RVector eigenvalues = solver.eigenvalues();  // ascending
  const double lambda_max = eigenvalues(m - 1);
  const double floor = -kPsdTol * lambda_max;
  if (eigenvalues(0) < floor) {
    std::ostringstream oss;
    oss << "eigenvalue " << eigenvalues(0) << " below the PSD floor " << floor;
    raise(Errc::NotPositiveSemidefinite, oss.str());
  }

  return HpsmMatrix(raw);
}

SpectralDecomposition spectral_decompose(const HpsmMatrix& mat) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(mat.entries());
  if (solver.info() != Eigen::Success) {
    raise(Errc::ConvergenceFailure, "eigenvalue iteration did not converge");
  }
  const int m = mat.dim();
  const RVector ascending = solver.eigenvalues();
  const CMatrix& vectors = solver.eigenvectors();

  SpectralDecomposition dec;
  dec.spectrum.resize(m);
  dec.unitary.resize(m, m);
  for (int k = 0; k < m; ++k) {
    const int src = m - 1 - k;  // descending order, deterministic for ties
    double value = ascending(src);
    if (value <= 0.0) value = 0.0;  // clamp negatives inside the PSD tolerance
    dec.spectrum(k) = value;
    dec.unitary.col(k) = vectors.col(src);

    // Phase convention: first non-negligible component real positive.
    int pivot = 0;
    double pivot_abs = 0.0;
    for (int i = 0; i < m; ++i) {
      const double a = std::abs(dec.unitary(i, k));
      if (a > 1e-12) {
        pivot = i;
        pivot_abs = a;
        break;
      }
      if (a > pivot_abs) {
        pivot = i;
        pivot_abs = a;
      }
    }
    const Complex u = dec.unitary(pivot, k);
    const double mag = std::abs(u);
    if (mag > 0.0) dec.unitary.col(k) *= std::conj(u) / mag;
  }
  return dec;
}

CMatrix haar_unitary(int m, RngStream& rng) {
  CMatrix ginibre(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      ginibre(i, j) = rng.next_complex_gaussian(1.0);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(ginibre);
  CMatrix q = qr.householderQ();
  const CMatrix& packed = qr.matrixQR();
  for (int j = 0; j < m; ++j) {
    const Complex r = packed(j, j);
    const double mag = std::abs(r);
    q.col(j) *= (mag > 0.0) ? r / mag : Complex(1.0, 0.0);
  }
  return q;
}

HpsmMatrix gen_from_spectrum(const RVector& spectrum, std::uint64_t seed) {
  const int m = static_cast<int>(spectrum.size());
  if (m < 1) raise(Errc::InvalidConfig, "spectrum must have at least one entry");
  for (int i = 0; i < m; ++i) {
    if (!std::isfinite(spectrum(i))) {
      raise(Errc::NonFiniteEntry, "spectrum entry " + std::to_string(i) + " is not finite");
    }
    if (spectrum(i) < 0.0) {
      std::ostringstream oss;
      oss << "spectrum entry " << i << " = " << spectrum(i) << " is negative";
      raise(Errc::NegativeSpectrumEntry, oss.str());
    }
  }

  RngStream rng(seed, kGinibreStream);
  const CMatrix u = haar_unitary(m, rng);
  CMatrix a = u * spectrum.cast<Complex>().asDiagonal() * u.adjoint();
  const CMatrix adj = a.adjoint();
  a = 0.5 * (a + adj);  // scrub rounding asymmetry
  return validate_hpsm(a);
}

HpsmMatrix gen_random_hpsm(int m, double lambda_max_target, std::uint64_t seed) {
  if (m < 1) raise(Errc::InvalidConfig, "dimension must be at least 1");
  if (!(lambda_max_target > 0.0) || !std::isfinite(lambda_max_target)) {
    raise(Errc::InvalidConfig, "lambda_max target must be positive and finite");
  }
  RngStream rng(seed, kSpectrumStream);
  RVector spectrum(m);
  for (int i = 0; i < m; ++i) spectrum(i) = rng.next_double();
  double top = spectrum.maxCoeff();
  if (top <= 0.0) {
    spectrum.setConstant(1.0);
    top = 1.0;
  }
  spectrum *= lambda_max_target / top;
  return gen_from_spectrum(spectrum, seed);
}

}  // namespace permest
