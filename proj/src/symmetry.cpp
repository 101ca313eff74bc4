#include "qdb/symmetry.hpp"

#include <cmath>

namespace qdb {

void SymmetryOp::validate(const Tolerances& tol) const {
  if (U.rows() != dim || U.cols() != dim)
    throw DimensionMismatch("symmetry: unitary part has wrong shape");
  if ((U.adjoint() * U - Mat::Identity(dim, dim)).norm() > 1e-9 * dim)
    throw ValidationError("symmetry: U is not unitary");
}

Mat SymmetryOp::Jsq() const {
  return antiunitary ? Mat(U * U.conjugate()) : Mat(U * U);
}

Mat SymmetryOp::morph(const Mat& X) const {
  return antiunitary ? Mat(U * X.conjugate() * U.adjoint())
                     : Mat(U * X * U.adjoint());
}

Mat SymmetryOp::morph_inv(const Mat& X) const {
  return antiunitary ? Mat(U.transpose() * X.conjugate() * U.conjugate())
                     : Mat(U.adjoint() * X * U);
}

SymmetryOp SymmetryOp::inverse() const {
  return antiunitary ? SymmetryOp{dim, U.transpose(), true}
                     : SymmetryOp{dim, U.adjoint(), false};
}

SymmetryOp SymmetryOp::left_compose(const Mat& W) const {
  return SymmetryOp{dim, W * U, antiunitary};
}

Admissibility is_admissible(const SymmetryOp& J, const QuantumChannel& Phi,
                            const DensityMatrix& rho, double tol) {
  if (J.dim != Phi.dim || rho.rho.rows() != Phi.dim)
    throw DimensionMismatch("is_admissible: dimension mismatch");
  Admissibility out;
  out.rho_residual = (J.morph(rho.rho) - rho.rho).norm();
  Mat J2 = J.Jsq();
  Mat PhiJ2 = Phi.apply(J2);
  cplx denom = (J2.adjoint() * J2).trace();
  out.eta = (J2.adjoint() * PhiJ2).trace() / denom;
  out.eta_residual = (PhiJ2 - out.eta * J2).norm();
  out.admissible = out.rho_residual <= tol && out.eta_residual <= tol &&
                   std::abs(std::abs(out.eta) - 1.0) <= tol;
  return out;
}

// For anti-unitary j the anti-linear legs conjugate the intervening
// linear part.
Mat reversed_map_superop(const Mat& S, const Mat& rho, const SymmetryOp& J,
                         const Tolerances& tol) {
  Mat rs = psd_sqrt(rho, tol);
  Mat ris = psd_inv_sqrt(rho, tol);
  Mat R = sandwich_superop(ris, ris) * S.adjoint() * sandwich_superop(rs, rs);
  const Mat& U = J.U;
  if (J.antiunitary)
    return kron(U.transpose(), U.adjoint()) * R.conjugate() *
           kron(U.conjugate(), U);
  return kron(Mat(U.adjoint()), Mat(U.transpose())) * R *
         kron(U, Mat(U.conjugate()));
}

Mat reversal_superop(const QuantumChannel& Phi, const DensityMatrix& rho,
                     const SymmetryOp& J, const Tolerances& tol) {
  return reversed_map_superop(heisenberg_superop(Phi), rho.rho, J, tol);
}

QuantumChannel reversal(const QuantumChannel& Phi, const DensityMatrix& rho,
                        const SymmetryOp& J, const Tolerances& tol) {
  rho.validate(true, tol);
  Mat S_hat = reversal_superop(Phi, rho, J, tol);
  return channel_from_superop(S_hat, Phi.dim);
}

QdbResult qdb_check(const QuantumChannel& Phi, const DensityMatrix& rho,
                    const SymmetryOp& J, double tol) {
  QdbResult out;
  out.adm = is_admissible(J, Phi, rho, tol);
  Mat S = heisenberg_superop(Phi);
  Mat S_hat = reversed_map_superop(S, rho.rho, J, default_tol());
  out.residual = (S_hat - S).norm();
  out.holds = out.adm.admissible && out.residual <= tol;
  return out;
}

std::vector<ExtendedSymmetry> extend_admissible(const QuantumChannel& Phi,
                                                const DensityMatrix& rho,
                                                const SymmetryOp& J,
                                                const MaximalCycle& cycle) {
  if (!J.antiunitary)
    throw NotAntiUnitary("extend_admissible: J must be anti-unitary");
  QdbResult base = qdb_check(Phi, rho, J);
  if (!base.holds)
    throw QDBFailed("extend_admissible: J does not satisfy detailed balance");
  const int p = cycle.period;
  const cplx xi = std::exp(cplx(0.0, 2.0 * M_PI / p));
  std::vector<ExtendedSymmetry> out;
  Mat Un = Mat::Identity(Phi.dim, Phi.dim);
  for (int n = 0; n < p; ++n) {
    cplx alpha = std::pow(xi, 2 * n);
    bool seen = false;
    for (const auto& e : out)
      if (std::abs(e.alpha - alpha) < 1e-9) { seen = true; break; }
    if (!seen) {
      ExtendedSymmetry e;
      e.J = J.left_compose(Un);
      e.alpha = alpha;
      e.eta = base.adm.eta * alpha;
      e.check = qdb_check(Phi, rho, e.J);
      out.push_back(std::move(e));
    }
    Un = Un * cycle.cycle_unitary;
  }
  return out;
}

double covariance_check(const QuantumChannel& Phi, const Mat& Gamma) {
  const int d = Phi.dim;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat E = matrix_unit(d, i, j);
      double r = (Phi.apply(Gamma * E * Gamma.adjoint()) -
                  Gamma * Phi.apply(E) * Gamma.adjoint())
                     .norm();
      worst = std::max(worst, r);
    }
  return worst;
}

StructuredJFamily StructuredJFamily::default_family(int dim) {
  StructuredJFamily f;
  f.dim = dim;
  for (int r = 0; r < dim; ++r) {
    std::vector<int> shift(dim), refl(dim);
    for (int a = 0; a < dim; ++a) {
      shift[a] = (a + r) % dim;
      refl[a] = ((r - a) % dim + dim) % dim;
    }
    f.permutations.push_back(shift);
    f.permutations.push_back(refl);
  }
  return f;
}

namespace {

struct Candidate {
  bool anti;
  int perm;
  int beta;
  int gamma;
};

SymmetryOp make_candidate(const StructuredJFamily& fam, const Candidate& c) {
  const int d = fam.dim;
  const int q = fam.phase_denominator;
  SymmetryOp J;
  J.dim = d;
  J.antiunitary = c.anti;
  J.U = Mat::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    long k = (long)c.beta * a + (long)c.gamma * a * a;
    cplx ph = std::exp(cplx(0.0, 2.0 * M_PI * (k % q) / q));
    J.U(fam.permutations[c.perm][a], a) = ph;
  }
  return J;
}

std::vector<SearchHit> search_impl(const QuantumChannel& Phi,
                                   const DensityMatrix& rho,
                                   const StructuredJFamily& fam, double tol,
                                   bool parallel) {
  // A global phase on J leaves both j and eta unchanged, so the constant
  // term of the phase lattice is dropped.
  std::vector<Candidate> cands;
  const int q = fam.phase_denominator;
  const int gmax = fam.quadratic_lattice ? q : 1;
  for (int anti = 0; anti < 2; ++anti) {
    if (anti ? !fam.include_antiunitary : !fam.include_unitary) continue;
    for (int p = 0; p < (int)fam.permutations.size(); ++p)
      for (int b = 0; b < q; ++b)
        for (int g = 0; g < gmax; ++g)
          cands.push_back({anti != 0, p, b, g});
  }
  std::vector<char> pass(cands.size(), 0);
  Mat S = heisenberg_superop(Phi);
  auto check_fast = [&](const Candidate& c) -> bool {
    SymmetryOp J = make_candidate(fam, c);
    // Cheap admissibility prefilter before the superoperator residual.
    Admissibility adm = is_admissible(J, Phi, rho, tol);
    if (!adm.admissible) return false;
    Mat S_hat = reversed_map_superop(S, rho.rho, J, default_tol());
    return (S_hat - S).norm() <= tol;
  };
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (long i = 0; i < (long)cands.size(); ++i) pass[i] = check_fast(cands[i]);
  std::vector<SearchHit> hits;
  for (size_t i = 0; i < cands.size(); ++i)
    if (pass[i]) {
      SearchHit h;
      h.J = make_candidate(fam, cands[i]);
      h.check = qdb_check(Phi, rho, h.J, tol);
      hits.push_back(std::move(h));
    }
  return hits;
}

}  // namespace

std::vector<SearchHit> search_qdb(const QuantumChannel& Phi,
                                  const DensityMatrix& rho,
                                  const StructuredJFamily& family, double tol) {
  return search_impl(Phi, rho, family, tol, true);
}

std::vector<SearchHit> search_qdb_serial(const QuantumChannel& Phi,
                                         const DensityMatrix& rho,
                                         const StructuredJFamily& family,
                                         double tol) {
  return search_impl(Phi, rho, family, tol, false);
}

}  // namespace qdb
