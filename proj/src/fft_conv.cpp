#include "morrey/fft_conv.hpp"

#include <fftw3.h>

#include <cstring>
#include <stdexcept>

namespace morrey {

struct PaddedConv::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  std::vector<std::complex<double>> cached;
};

PaddedConv::PaddedConv(std::vector<int> dims) : impl_(new Impl), dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("PaddedConv: empty dims");
  n_real_ = 1;
  for (size_t i = 0; i + 1 < dims_.size(); ++i) n_real_ *= dims_[i];
  const int last = dims_.back();
  n_cplx_ = n_real_ * (last / 2 + 1);
  n_real_ *= last;

  impl_->real = fftw_alloc_real(size_t(n_real_));
  impl_->cplx = fftw_alloc_complex(size_t(n_cplx_));
  if (!impl_->real || !impl_->cplx) throw std::bad_alloc();
  impl_->fwd = fftw_plan_dft_r2c(int(dims_.size()), dims_.data(), impl_->real,
                                 impl_->cplx, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_c2r(int(dims_.size()), dims_.data(), impl_->cplx,
                                 impl_->real, FFTW_ESTIMATE);
  if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("PaddedConv: plan failure");
}

PaddedConv::~PaddedConv() {
  if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
  if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
  if (impl_->real) fftw_free(impl_->real);
  if (impl_->cplx) fftw_free(impl_->cplx);
}

void PaddedConv::set_field(const Eigen::ArrayXd& a) {
  if (a.size() != n_real_) throw std::invalid_argument("PaddedConv: size mismatch");
  std::memcpy(impl_->real, a.data(), size_t(n_real_) * sizeof(double));
  fftw_execute(impl_->fwd);
  impl_->cached.assign(reinterpret_cast<std::complex<double>*>(impl_->cplx),
                       reinterpret_cast<std::complex<double>*>(impl_->cplx) + n_cplx_);
}

Eigen::ArrayXd PaddedConv::convolve_with_field(const Eigen::ArrayXd& b) {
  if (impl_->cached.empty()) throw std::logic_error("PaddedConv: no cached field");
  if (b.size() != n_real_) throw std::invalid_argument("PaddedConv: size mismatch");
  std::memcpy(impl_->real, b.data(), size_t(n_real_) * sizeof(double));
  fftw_execute(impl_->fwd);
  auto* c = reinterpret_cast<std::complex<double>*>(impl_->cplx);
  const double scale = 1.0 / double(n_real_);
  for (long i = 0; i < n_cplx_; ++i) c[i] *= impl_->cached[size_t(i)] * scale;
  fftw_execute(impl_->bwd);
  return Eigen::Map<Eigen::ArrayXd>(impl_->real, n_real_);
}

Eigen::ArrayXd PaddedConv::convolve(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  set_field(a);
  return convolve_with_field(b);
}

std::vector<std::complex<double>> PaddedConv::forward(const Eigen::ArrayXd& a) {
  if (a.size() != n_real_) throw std::invalid_argument("PaddedConv: size mismatch");
  std::memcpy(impl_->real, a.data(), size_t(n_real_) * sizeof(double));
  fftw_execute(impl_->fwd);
  auto* c = reinterpret_cast<std::complex<double>*>(impl_->cplx);
  return std::vector<std::complex<double>>(c, c + n_cplx_);
}

Eigen::ArrayXd PaddedConv::inverse_product(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b) {
  if (long(a.size()) != n_cplx_ || long(b.size()) != n_cplx_)
    throw std::invalid_argument("PaddedConv: spectrum size mismatch");
  auto* c = reinterpret_cast<std::complex<double>*>(impl_->cplx);
  const double scale = 1.0 / double(n_real_);
  for (long i = 0; i < n_cplx_; ++i) c[i] = a[size_t(i)] * b[size_t(i)] * scale;
  fftw_execute(impl_->bwd);
  return Eigen::Map<Eigen::ArrayXd>(impl_->real, n_real_);
}

} // namespace morrey
