#pragma once

// Dense matrix exponential by scaling and squaring with diagonal Padé
// approximants of degree 3, 5, 7, 9 or 13 (Higham 2005 degree selection).

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace ratingmc {

namespace detail {

// Largest 1-norm for which the degree-m approximant is accurate to unit roundoff.
inline constexpr std::array<double, 5> kPadeDegrees{3, 5, 7, 9, 13};
inline constexpr std::array<double, 5> kPadeTheta{1.495585217958292e-2, 2.539398330063230e-1,
                                                  9.504178996162932e-1, 2.097847961257068e0,
                                                  5.371920351148152e0};

inline constexpr std::array<double, 4> kPade3{120., 60., 12., 1.};
inline constexpr std::array<double, 6> kPade5{30240., 15120., 3360., 420., 30., 1.};
inline constexpr std::array<double, 8> kPade7{17297280., 8648640., 1995840., 277200.,
                                              25200.,    1512.,    56.,      1.};
inline constexpr std::array<double, 10> kPade9{17643225600., 8821612800., 2075673600., 302702400.,
                                               30270240.,    2162160.,    110880.,     3960.,
                                               90.,          1.};
inline constexpr std::array<double, 14> kPade13{64764752532480000., 32382376266240000.,
                                                7771770303897600.,  1187353796428800.,
                                                129060195264000.,   10559470521600.,
                                                670442572800.,      33522128640.,
                                                1323241920.,        40840800.,
                                                960960.,            16380.,
                                                182.,               1.};

template <typename Matrix, std::size_t N>
void pade_low_order(const Matrix& a, const std::array<double, N>& b, Matrix& u, Matrix& v) {
  const Matrix ident = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  Matrix power = ident;  // a^(2k)
  Matrix odd = Matrix::Zero(a.rows(), a.cols());
  v = Matrix::Zero(a.rows(), a.cols());
  for (std::size_t k = 0; 2 * k < N; ++k) {
    v += b[2 * k] * power;
    odd += b[2 * k + 1] * power;
    power = power * a2;
  }
  u = a * odd;
}

template <typename Matrix>
void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  const auto& b = kPade13;
  const Matrix ident = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix inner_u = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const Matrix inner_v = b[12] * a6 + b[10] * a4 + b[8] * a2;
  u = a * (a6 * inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  v = a6 * inner_v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

}  // namespace detail

/// exp(A) for a square matrix with finite entries.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
expm(const Eigen::MatrixBase<Derived>& input) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime,
                               Derived::ColsAtCompileTime>;
  if (input.rows() != input.cols()) throw std::invalid_argument("expm: matrix is not square");
  if (!input.allFinite()) throw std::invalid_argument("expm: non-finite matrix entry");

  Matrix a = input;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  Matrix u;
  Matrix v;
  int squarings = 0;
  if (norm1 <= detail::kPadeTheta[0]) {
    detail::pade_low_order(a, detail::kPade3, u, v);
  } else if (norm1 <= detail::kPadeTheta[1]) {
    detail::pade_low_order(a, detail::kPade5, u, v);
  } else if (norm1 <= detail::kPadeTheta[2]) {
    detail::pade_low_order(a, detail::kPade7, u, v);
  } else if (norm1 <= detail::kPadeTheta[3]) {
    detail::pade_low_order(a, detail::kPade9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / detail::kPadeTheta[4]))));
    a /= std::ldexp(1.0, squarings);
    detail::pade13(a, u, v);
  }
  Matrix result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

}  // namespace ratingmc
