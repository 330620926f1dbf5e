// Copyright 2026 The qinv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oracles.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qinv::testing {

namespace {

Mat vec(const Mat& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Mat unvec(const Mat& v, int dim) {
  return Eigen::Map<const Mat>(v.data(), dim, dim);
}

// vec(A X B) = (B^T kron A) vec(X)
Mat left_right(const Mat& a, const Mat& b) {
  return kron(b.transpose(), a);
}

}  // namespace

Mat Rng::hermitian(int dim) {
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Cplx(normal(), normal());
  }
  return 0.5 * (m + m.adjoint());
}

Mat Rng::density(int dim) {
  Mat w(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) w(i, j) = Cplx(normal(), normal());
  }
  Mat rho = w * w.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

Mat Rng::pure_state(int dim) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Cplx(normal(), normal());
  v.normalize();
  return v * v.adjoint();
}

Mat sx() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat sy() {
  Mat m(2, 2);
  m << 0, Cplx(0, 1), Cplx(0, -1), 0;
  return m;
}

Mat sz() {
  Mat m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}

Mat id(int dim) {
  return Mat::Identity(dim, dim);
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Mat liouvillian_superop(const ConstantModel& m) {
  const int n = static_cast<int>(m.h.rows());
  const Mat one = id(n);
  const Cplx i(0, 1);
  Mat l = -i * (left_right(m.h, one) - left_right(one, m.h));
  for (const Mat& f : m.f) {
    const Mat ff = f.adjoint() * f;
    l += left_right(f, f.adjoint()) - 0.5 * (left_right(ff, one) + left_right(one, ff));
  }
  return l;
}

Mat adjoint_superop(const ConstantModel& m) {
  const int n = static_cast<int>(m.h.rows());
  const Mat one = id(n);
  const Cplx i(0, 1);
  Mat l = -i * (left_right(m.h, one) - left_right(one, m.h));
  for (const Mat& f : m.f) {
    const Mat ff = f.adjoint() * f;
    l -= left_right(f.adjoint(), f) - 0.5 * (left_right(ff, one) + left_right(one, ff));
  }
  return l;
}

Mat evolve_exact(const Mat& superop, const Mat& x0, double t) {
  const Mat prop = (t * superop).exp();
  return unvec(prop * vec(x0), static_cast<int>(x0.rows()));
}

double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

std::vector<std::vector<double>> rk4_real(
    const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
    std::vector<double> y0, double T, int steps) {
  const double h = T / steps;
  std::vector<std::vector<double>> out{y0};
  std::vector<double> y = std::move(y0);
  const auto axpy = [](const std::vector<double>& a, double s, const std::vector<double>& b) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  for (int k = 0; k < steps; ++k) {
    const double t = T * k / steps;
    const auto k1 = f(t, y);
    const auto k2 = f(t + h / 2, axpy(y, h / 2, k1));
    const auto k3 = f(t + h / 2, axpy(y, h / 2, k2));
    const auto k4 = f(t + h, axpy(y, h, k3));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    out.push_back(y);
  }
  return out;
}

double log_slope(const std::vector<double>& times, const std::vector<double>& values) {
  double st = 0, sl = 0, stt = 0, stl = 0;
  const double n = static_cast<double>(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double l = std::log(values[k]);
    st += times[k];
    sl += l;
    stt += times[k] * times[k];
    stl += times[k] * l;
  }
  return (n * stl - st * sl) / (n * stt - st * st);
}

}  // namespace qinv::testing
