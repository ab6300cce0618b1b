#include "gradflow/physics/convolution.hpp"

#include <fftw3.h>

#include <complex>
#include <vector>

namespace gradflow::physics {

namespace {
inline int wrap(int d, int p) { return ((d % p) + p) % p; }
}  // namespace

struct Convolution::Impl {
  const fem::Discretization& disc;
  std::function<double(double, double)> kernel;
  bool singular;
  ConvolutionMode mode;

  fem::QuadRule1D src;  // per-cell 1D source rule
  int ma, ms;           // 1D node counts: target (k+1), source
  double cell_w_scale;  // hx*hy

  // FFT state (Fft mode only).
  int px = 0, py = 0, nc = 0;
  double* real_buf = nullptr;
  fftw_complex* cplx_buf = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;
  std::vector<std::vector<std::complex<double>>> kernel_hat;  // [a*ms^2+b]
  mutable std::vector<std::vector<std::complex<double>>> acc;  // [a]

  Impl(const fem::Discretization& d, std::function<double(double, double)> w,
       bool sing, ConvolutionMode m)
      : disc(d), kernel(std::move(w)), singular(sing), mode(m) {
    ma = disc.degree() + 1;
    src = singular ? fem::gauss_legendre_1d(disc.degree() + 2) : disc.rule_1d();
    ms = static_cast<int>(src.nodes.size());
    cell_w_scale = disc.mesh().hx() * disc.mesh().hy();
    if (mode == ConvolutionMode::Fft) setup_fft();
  }

  ~Impl() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (real_buf) fftw_free(real_buf);
    if (cplx_buf) fftw_free(cplx_buf);
  }

  void setup_fft() {
    const auto& mesh = disc.mesh();
    px = 2 * mesh.nx;
    py = 2 * mesh.ny;
    nc = py * (px / 2 + 1);
    real_buf = fftw_alloc_real(static_cast<std::size_t>(px) * py);
    cplx_buf = fftw_alloc_complex(nc);
    fwd = fftw_plan_dft_r2c_2d(py, px, real_buf, cplx_buf, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(py, px, cplx_buf, real_buf, FFTW_ESTIMATE);

    const auto& tgt = disc.rule_1d().nodes;
    const double hx = mesh.hx(), hy = mesh.hy();
    kernel_hat.assign(static_cast<std::size_t>(ma * ma) * ms * ms, {});
    for (int ay = 0; ay < ma; ++ay)
      for (int ax = 0; ax < ma; ++ax)
        for (int by = 0; by < ms; ++by)
          for (int bx = 0; bx < ms; ++bx) {
            std::fill(real_buf, real_buf + static_cast<std::size_t>(px) * py,
                      0.0);
            for (int dy = -(mesh.ny - 1); dy <= mesh.ny - 1; ++dy)
              for (int dx = -(mesh.nx - 1); dx <= mesh.nx - 1; ++dx) {
                const double X = (dx + tgt[ax] - src.nodes[bx]) * hx;
                const double Y = (dy + tgt[ay] - src.nodes[by]) * hy;
                real_buf[wrap(dy, py) * px + wrap(dx, px)] = kernel(X, Y);
              }
            fftw_execute(fwd);
            auto& kh = kernel_hat[pair_index(ay * ma + ax, by * ms + bx)];
            kh.resize(nc);
            for (int i = 0; i < nc; ++i)
              kh[i] = {cplx_buf[i][0], cplx_buf[i][1]};
          }
    acc.assign(ma * ma, std::vector<std::complex<double>>(nc));
  }

  std::size_t pair_index(int a, int b) const {
    return static_cast<std::size_t>(a) * ms * ms + b;
  }

  Eigen::VectorXd source_values(const fem::QuadField& rho) const {
    if (!singular) return rho;
    return disc.values_at_rule(rho, src);
  }

  double source_weight(int bx, int by) const {
    return src.weights[bx] * src.weights[by] * cell_w_scale;
  }

  fem::QuadField apply_direct(const fem::QuadField& rho) const {
    const auto& mesh = disc.mesh();
    const Eigen::VectorXd vs = source_values(rho);
    const double hx = mesh.hx(), hy = mesh.hy();
    fem::QuadField out(disc.num_nodes());
#pragma omp parallel for schedule(static)
    for (int q = 0; q < disc.num_nodes(); ++q) {
      const double xt = disc.node_x()[q], yt = disc.node_y()[q];
      double s = 0.0;
      for (int cy = 0; cy < mesh.ny; ++cy)
        for (int cx = 0; cx < mesh.nx; ++cx) {
          const int cell = cy * mesh.nx + cx;
          for (int by = 0; by < ms; ++by) {
            const double ys = mesh.ymin + (cy + src.nodes[by]) * hy;
            for (int bx = 0; bx < ms; ++bx) {
              const double xs = mesh.xmin + (cx + src.nodes[bx]) * hx;
              s += kernel(xt - xs, yt - ys) *
                   vs[cell * ms * ms + by * ms + bx] * source_weight(bx, by);
            }
          }
        }
      out[q] = s;
    }
    return out;
  }

  fem::QuadField apply_fft(const fem::QuadField& rho) const {
    const auto& mesh = disc.mesh();
    const Eigen::VectorXd vs = source_values(rho);
    for (auto& a : acc) std::fill(a.begin(), a.end(), std::complex<double>{});

    for (int by = 0; by < ms; ++by)
      for (int bx = 0; bx < ms; ++bx) {
        const double wb = source_weight(bx, by);
        std::fill(real_buf, real_buf + static_cast<std::size_t>(px) * py, 0.0);
        for (int cy = 0; cy < mesh.ny; ++cy)
          for (int cx = 0; cx < mesh.nx; ++cx)
            real_buf[cy * px + cx] =
                vs[(cy * mesh.nx + cx) * ms * ms + by * ms + bx] * wb;
        fftw_execute(fwd);
        const int b = by * ms + bx;
        for (int a = 0; a < ma * ma; ++a) {
          const auto& kh = kernel_hat[pair_index(a, b)];
          auto& ac = acc[a];
          for (int i = 0; i < nc; ++i)
            ac[i] += kh[i] * std::complex<double>{cplx_buf[i][0], cplx_buf[i][1]};
        }
      }

    fem::QuadField out(disc.num_nodes());
    const double scale = 1.0 / (static_cast<double>(px) * py);
    for (int a = 0; a < ma * ma; ++a) {
      for (int i = 0; i < nc; ++i) {
        cplx_buf[i][0] = acc[a][i].real();
        cplx_buf[i][1] = acc[a][i].imag();
      }
      fftw_execute(bwd);
      for (int cy = 0; cy < mesh.ny; ++cy)
        for (int cx = 0; cx < mesh.nx; ++cx)
          out[(cy * mesh.nx + cx) * ma * ma + a] =
              real_buf[cy * px + cx] * scale;
    }
    return out;
  }
};

Convolution::Convolution(const fem::Discretization& disc,
                         std::function<double(double, double)> kernel,
                         bool singular, ConvolutionMode mode)
    : impl_(std::make_unique<Impl>(disc, std::move(kernel), singular, mode)) {}

Convolution::~Convolution() = default;

ConvolutionMode Convolution::mode() const { return impl_->mode; }

fem::QuadField Convolution::apply(const fem::QuadField& rho) const {
  if (rho.size() != impl_->disc.num_nodes())
    throw std::invalid_argument("Convolution::apply: field size mismatch");
  return impl_->mode == ConvolutionMode::Fft ? impl_->apply_fft(rho)
                                             : impl_->apply_direct(rho);
}

}  // namespace gradflow::physics
