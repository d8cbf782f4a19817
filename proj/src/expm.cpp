#include "kreach/expm.hpp"

#include <array>
#include <cmath>

#include <Eigen/LU>

#include "kreach/errors.hpp"

namespace kreach {
namespace {

constexpr std::array<double, 4> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;

constexpr std::array<double, 4> kB3 = {120., 60., 12., 1.};
constexpr std::array<double, 6> kB5 = {30240., 15120., 3360., 420., 30., 1.};
constexpr std::array<double, 8> kB7 = {17297280., 8648640., 1995840., 277200.,
                                       25200.,    1512.,    56.,      1.};
constexpr std::array<double, 10> kB9 = {17643225600., 8821612800., 2075673600., 302702400.,
                                        30270240.,    2162160.,    110880.,     3960.,
                                        90.,          1.};
constexpr std::array<double, 14> kB13 = {
    64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
    129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
    1323241920.,        40840800.,          960960.,           16380.,
    182.,               1.};

template <std::size_t N>
DenseMatrix pade_low(const DenseMatrix& a) {
  const Eigen::Index n = a.rows();
  const DenseMatrix ident = DenseMatrix::Identity(n, n);
  const DenseMatrix a2 = a * a;
  DenseMatrix power = ident;  // a^(2j)
  DenseMatrix u_inner = DenseMatrix::Zero(n, n);
  DenseMatrix v = DenseMatrix::Zero(n, n);
  for (std::size_t j = 0; 2 * j < N; ++j) {
    const auto& b = N == 4 ? kB3.data() : N == 6 ? kB5.data() : N == 8 ? kB7.data() : kB9.data();
    v += b[2 * j] * power;
    u_inner += b[2 * j + 1] * power;
    power = power * a2;
  }
  const DenseMatrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

DenseMatrix pade13(const DenseMatrix& a) {
  const Eigen::Index n = a.rows();
  const auto& b = kB13;
  const DenseMatrix ident = DenseMatrix::Identity(n, n);
  const DenseMatrix a2 = a * a;
  const DenseMatrix a4 = a2 * a2;
  const DenseMatrix a6 = a4 * a2;
  const DenseMatrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
           b[1] * ident);
  const DenseMatrix v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

DenseMatrix expm(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw NumericalError("expm: matrix is not square");
  if (!m.allFinite()) throw NumericalError("expm: non-finite entry");
  if (m.rows() == 0) return m;
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  if (norm <= kTheta[0]) return pade_low<4>(m);
  if (norm <= kTheta[1]) return pade_low<6>(m);
  if (norm <= kTheta[2]) return pade_low<8>(m);
  if (norm <= kTheta[3]) return pade_low<10>(m);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  DenseMatrix r = pade13(m / std::ldexp(1.0, squarings));
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

Eigen::VectorXd expm_action_column(const DenseMatrix& m, double t) {
  if (m.rows() != m.cols()) throw NumericalError("expm_action_column: matrix is not square");
  if (t == 0.0) return Eigen::VectorXd::Unit(m.rows(), 0);
  return expm(m * t).col(0);
}

DenseMatrix expm_action_column_grid(const DenseMatrix& m, double dt, std::size_t count) {
  if (m.rows() != m.cols()) throw NumericalError("expm_action_column_grid: matrix is not square");
  const Eigen::Index k = m.rows();
  DenseMatrix out(k, static_cast<Eigen::Index>(count));
  if (count == 0) return out;
  out.col(0) = Eigen::VectorXd::Unit(k, 0);
  if (count == 1) return out;
  const DenseMatrix propagator = expm(m * dt);
  for (Eigen::Index j = 1; j < static_cast<Eigen::Index>(count); ++j)
    out.col(j).noalias() = propagator * out.col(j - 1);
  return out;
}

double h_entry(const DenseMatrix& h, double t) {
  if (h.rows() != h.cols() || h.rows() == 0) throw NumericalError("h_entry: bad matrix shape");
  if (t == 0.0) return h.rows() == 1 ? 1.0 : 0.0;
  return expm(-t * h)(h.rows() - 1, 0);
}

}  // namespace kreach
