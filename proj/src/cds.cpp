#include "qdb/cds.hpp"

#include <cmath>

namespace qdb {

namespace {
int mod(int a, int d) { return ((a % d) + d) % d; }
cplx xi_pow(int d, double k) {
  return std::exp(cplx(0.0, 2.0 * M_PI * k / d));
}
}  // namespace

int CdsParams::dhat() const {
  if (d % 2 == 1) return (d - 1) / 2;
  return (a0 % 2 == 0) ? (d - 2) / 2 : d / 2;
}

void CdsParams::validate() const {
  if (d < 2) throw ValidationError("cds: d must be at least 2");
  if (d == 2 && mod(a0, 2) == 0)
    throw SingularCase("cds: d=2 with even a0 is singular");
  if ((int)x.size() != dhat())
    throw BadParity("cds: x has wrong length for this (d, a0) parity");
  for (double v : x)
    if (v < 0.0 || v > 1.0)
      throw ValidationError("cds: x outside [0,1]");
  if ((int)eta.size() != d)
    throw ValidationError("cds: eta must have length d");
  for (const cplx& e : eta)
    if (std::abs(std::abs(e) - 1.0) > 1e-12)
      throw ValidationError("cds: eta entries must have modulus 1");
}

std::vector<double> build_p(int d, int a0, const std::vector<double>& x) {
  CdsParams probe;
  probe.d = d;
  probe.a0 = mod(a0, d);
  probe.x = x;
  probe.eta.assign(d, cplx(1.0, 0.0));
  probe.validate();
  a0 = probe.a0;
  const int dh = probe.dhat();
  std::vector<double> p(d, 0.0);
  if (d % 2 == 1) {
    // Unique fixed point ahat of a -> sigma(a)-shifted pairing, p_ahat = 1/2.
    int ahat = (a0 % 2 == 0) ? a0 / 2 : (a0 + d) / 2;
    p[ahat] = 0.5;
    for (int k = 1; k <= dh; ++k) {
      p[mod(ahat + k, d)] = x[k - 1] * x[k - 1];
      p[mod(ahat - k, d)] = 1.0 - x[k - 1] * x[k - 1];
    }
  } else if (a0 % 2 == 0) {
    int a1 = a0 / 2, a2 = mod(a0 / 2 + d / 2, d);
    p[a1] = p[a2] = 0.5;
    for (int k = 1; k <= dh; ++k) {
      p[mod(a1 + k, d)] = x[k - 1] * x[k - 1];
      p[mod(a1 - k, d)] = 1.0 - x[k - 1] * x[k - 1];
    }
  } else {
    int base = (a0 - 1) / 2;
    for (int k = 1; k <= dh; ++k) {
      p[mod(base + k, d)] = x[k - 1] * x[k - 1];
      p[mod((a0 + 1) / 2 - k, d)] = 1.0 - x[k - 1] * x[k - 1];
    }
  }
  return p;
}

CdsChannel build(const CdsParams& params) {
  params.validate();
  const int d = params.d;
  CdsChannel out;
  out.params = params;
  out.p = build_p(d, params.a0, params.x);

  Mat M = Mat::Zero(d, d);  // the linear factor of J
  for (int a = 0; a < d; ++a)
    M(params.sigma(mod(a - 1, d)), a) = params.eta[a];
  out.J.dim = d;
  out.J.antiunitary = params.antiunitary_K;
  // J applies the conjugation after the linear factor, so the unitary part
  // of an anti-unitary J is the conjugate matrix.
  out.J.U = params.antiunitary_K ? Mat(M.conjugate()) : M;

  out.V1 = Mat::Zero(d, d);
  for (int a = 0; a < d; ++a)
    out.V1(mod(a + 1, d), a) = std::sqrt(out.p[a]);
  out.V2 = out.J.morph_inv(out.V1.adjoint());

  out.channel.dim = d;
  out.channel.kraus = {out.V1, out.V2};
  out.rho = DensityMatrix{Mat::Identity(d, d) / d};
  return out;
}

cplx coeff_C(const CdsParams& params, const std::vector<double>& p, int a,
             int b) {
  const int d = params.d;
  a = mod(a, d);
  b = mod(b, d);
  int am = mod(a - 1, d), bm = mod(b - 1, d);
  const auto& e = params.eta;
  cplx phase = (e[a] * std::conj(e[am])) * (std::conj(e[b]) * e[bm]);
  return std::sqrt(p[am] * p[bm]) +
         phase * std::sqrt(p[params.sigma(am)] * p[params.sigma(bm)]);
}

QdbPrediction predicted_qdb(const CdsParams& params) {
  params.validate();
  const int d = params.d;
  SymmetryOp conv{d, Mat::Identity(d, d), params.antiunitary_K};
  std::vector<cplx> theta(d);
  for (int a = 0; a < d; ++a)
    theta[a] = conv.sharp(params.eta[params.sigma(mod(a - 1, d))]) *
               params.eta[a];
  QdbPrediction out;
  out.zeta = theta[0];
  out.eta = theta[1 % d] / theta[0];
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    worst = std::max(worst,
                     std::abs(theta[mod(a + 1, d)] - out.eta * theta[a]));
  bool root = std::abs(std::pow(out.eta, d) - cplx(1.0, 0.0)) < 1e-9;
  out.holds = worst < 1e-9 && root;
  return out;
}

CdsParams preset(const std::string& name, const std::vector<double>& x, int p,
                 double s) {
  CdsParams out;
  auto eta_ramp = [&](int d, int dh) {
    // eta_a = 1 up to dhat, then xi_d^{3(a+1/2)}.
    out.eta.assign(d, cplx(1.0, 0.0));
    for (int a = dh + 1; a < d; ++a) out.eta[a] = xi_pow(d, 3.0 * (a + 0.5));
  };
  if (name == "fig2a") {
    out.d = 5;
    out.a0 = 3;
    out.x = x.empty() ? std::vector<double>{0.6, 0.7} : x;
    out.eta.assign(5, cplx(1.0, 0.0));
    out.antiunitary_K = true;
  } else if (name == "fig2b") {
    out.d = 6;
    out.a0 = 4;
    out.x = x.empty() ? std::vector<double>{0.6, 0.7} : x;
    eta_ramp(6, 2);
    out.antiunitary_K = true;
  } else if (name == "table1" || name == "fig5") {
    if (name == "fig5") p = 4;
    if (p < 2 || p % 2 != 0)
      throw ValidationError("table1: p must be even and at least 2");
    const int d = 3 * p;
    const int dh = (d - 2) / 2;
    out.d = d;
    out.a0 = d - 2;
    out.x.assign(dh, 0.0);
    out.x[dh - 1] = std::sqrt(1.0 - s);
    eta_ramp(d, dh);
    out.antiunitary_K = true;
  } else if (name == "fig4a") {
    out.d = 6;
    out.a0 = 5;
    out.x = x.empty() ? std::vector<double>{0.55, 0.6, 0.7} : x;
    out.eta.resize(6);
    for (int a = 0; a < 3; ++a) out.eta[a] = xi_pow(6, a);
    for (int a = 3; a < 6; ++a) out.eta[a] = xi_pow(6, out.sigma(a - 1));
    out.antiunitary_K = true;
  } else if (name == "fig4b") {
    out.d = 6;
    out.a0 = 5;
    out.x = x.empty() ? std::vector<double>{0.55, 0.6, 0.7} : x;
    out.eta.resize(6);
    for (int a = 0; a < 6; ++a)
      out.eta[a] = (a % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    out.antiunitary_K = false;
  } else {
    throw UnknownPreset("preset: unknown name " + name);
  }
  return out;
}

}  // namespace qdb
