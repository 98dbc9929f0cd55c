#include "adtrack/eco_solver.hpp"

#include <cmath>
#include <string>

#include "adtrack/fft.hpp"

namespace adtrack {

namespace {

using Field = std::vector<SpectrumMap>;

double dot_re(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t t = 0; t < a[k].numel(); ++t) s += (std::conj(a[k][t]) * b[k][t]).real();
  return s;
}

double norm(const Field& a) { return std::sqrt(dot_re(a, a)); }

void axpy(double alpha, const Field& x, Field& y) {
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t t = 0; t < x[k].numel(); ++t) y[k][t] += alpha * x[k][t];
}

Field zeros(std::size_t K, GridSize g) { return Field(K, SpectrumMap(g)); }

}  // namespace

void apply_eco_operator(std::span<const kernels::WeightedSample> samples, const SpatialRegularizer& reg,
                        std::span<const SpectrumMap> h, std::span<SpectrumMap> out, kernels::Backend backend) {
  kernels::apply_data_term(samples, h, out, backend);
  const auto& w2 = reg.filter_weights_sq;
  if (w2.size() != h[0].size()) throw std::invalid_argument("train_eco: regularizer grid mismatch");
  const auto K = static_cast<std::ptrdiff_t>(h.size());
#pragma omp parallel for schedule(static) if (backend == kernels::Backend::OpenMP)
  for (std::ptrdiff_t k = 0; k < K; ++k) {
    SpectrumMap s = ifft2(h[k]);
    for (std::size_t t = 0; t < s.numel(); ++t) s[t] *= w2[t];
    const SpectrumMap f = fft2(s);
    for (std::size_t t = 0; t < f.numel(); ++t) out[k][t] += f[t];
  }
}

EcoResult train_eco(std::span<const kernels::WeightedSample> samples, const SpatialRegularizer& reg,
                    const GaussianLabel& y, const std::vector<SpectrumMap>* warm_start, const CgOptions& cg,
                    kernels::Backend backend) {
  if (samples.empty()) throw std::invalid_argument("train_eco: sample memory is empty");
  if (cg.max_iters < 0 || !(cg.tol > 0.0)) throw std::invalid_argument("train_eco: invalid CG options");
  const std::size_t K = samples[0].channels.size();
  const GridSize g = y.grid;
  if (samples[0].channels.empty() || samples[0].channels[0].size() != g)
    throw std::invalid_argument("train_eco: samples are not on the label grid");
  if (reg.weights.size() != g) throw std::invalid_argument("train_eco: regularizer grid mismatch");

  Field b = zeros(K, g);
  kernels::data_rhs(samples, y.spectrum, b, backend);

  // Jacobi preconditioner: data diagonal plus the mean of w^2 (the DC of the regularizer's convolution)
  Field diag = zeros(K, g);
  kernels::data_diagonal(samples, diag, backend);
  for (auto& d : diag)
    for (auto& v : d) v = 1.0 / (v.real() + reg.mean_sq);

  EcoResult res;
  res.filters = zeros(K, g);
  if (warm_start != nullptr) {
    if (warm_start->size() != K) throw std::invalid_argument("train_eco: warm start has the wrong channel count");
    for (std::size_t k = 0; k < K; ++k) {
      if ((*warm_start)[k].size() != g) throw std::invalid_argument("train_eco: warm start grid mismatch");
      res.filters[k] = (*warm_start)[k];
    }
  }

  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    res.filters = zeros(K, g);
    res.converged = true;
    res.trace.push_back(0.0);
    return res;
  }

  Field& x = res.filters;
  Field r = zeros(K, g), Ap = zeros(K, g);
  apply_eco_operator(samples, reg, x, Ap, backend);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t t = 0; t < g.area(); ++t) r[k][t] = b[k][t] - Ap[k][t];

  auto precondition = [&](const Field& in) {
    Field z = zeros(K, g);
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t t = 0; t < g.area(); ++t) z[k][t] = diag[k][t].real() * in[k][t];
    return z;
  };

  double rel = norm(r) / bnorm;
  res.trace.push_back(rel);
  if (rel <= cg.tol) {
    res.converged = true;
    res.relative_residual = rel;
    return res;
  }

  // Divergence is judged on the residual in the A^-1 norm, ||r||_{A^-1} = ||x - x*||_A, which CG
  // decreases monotonically in exact arithmetic. Up to a constant it equals the quadratic energy
  // f(x) = x^H A x / 2 - Re(b^H x) = -Re(b^H x + x^H r) / 2. The Euclidean residual is recorded
  // in the trace but oscillates on these systems, so it cannot signal divergence on its own.
  auto energy = [&] { return -0.5 * (dot_re(b, x) + dot_re(x, r)); };
  double f = energy();
  res.energy.push_back(f);

  Field z = precondition(r);
  Field p = z;
  double rz = dot_re(r, z);
  int growth = 0;
  for (int it = 1; it <= cg.max_iters; ++it) {
    apply_eco_operator(samples, reg, p, Ap, backend);
    const double pAp = dot_re(p, Ap);
    if (!(pAp > 0.0) || !std::isfinite(pAp))
      throw CgDivergence("train_eco: operator is not positive definite along the search direction at iteration " +
                             std::to_string(it),
                         res.trace);
    const double alpha = rz / pAp;
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    rel = norm(r) / bnorm;
    res.trace.push_back(rel);
    res.iterations = it;
    if (!std::isfinite(rel))
      throw CgDivergence("train_eco: non-finite residual at iteration " + std::to_string(it), res.trace);
    const double f_next = energy();
    res.energy.push_back(f_next);
    // changes below the rounding level of the energy itself carry no signal
    growth = f_next > f + 1e-12 * std::abs(f) ? growth + 1 : 0;
    f = f_next;
    if (growth >= 5)
      throw CgDivergence("train_eco: residual grew for 5 consecutive iterations (iteration " + std::to_string(it) + ")",
                         res.trace);
    if (rel <= cg.tol) {
      res.converged = true;
      break;
    }
    z = precondition(r);
    const double rz_next = dot_re(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t t = 0; t < g.area(); ++t) p[k][t] = z[k][t] + beta * p[k][t];
  }
  res.relative_residual = rel;
  return res;
}

}  // namespace adtrack
