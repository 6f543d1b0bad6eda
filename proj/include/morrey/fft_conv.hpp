#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace morrey {

/// Circular convolution on a padded real lattice via FFTW (r2c/c2r).
/// Callers embed data so that no wraparound contaminates the window of
/// interest (pad each axis to at least twice the data extent).
class PaddedConv {
 public:
  explicit PaddedConv(std::vector<int> dims);
  ~PaddedConv();
  PaddedConv(const PaddedConv&) = delete;
  PaddedConv& operator=(const PaddedConv&) = delete;

  long size() const { return n_real_; }
  const std::vector<int>& dims() const { return dims_; }

  /// Cache the transform of a field for repeated convolutions.
  void set_field(const Eigen::ArrayXd& a);
  /// Circular convolution of the cached field with b.
  Eigen::ArrayXd convolve_with_field(const Eigen::ArrayXd& b);
  /// One-shot circular convolution.
  Eigen::ArrayXd convolve(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b);

  /// Forward transform of a real field (half-complex spectrum).
  std::vector<std::complex<double>> forward(const Eigen::ArrayXd& a);
  /// Inverse transform of the pointwise product of two spectra.
  Eigen::ArrayXd inverse_product(const std::vector<std::complex<double>>& a,
                                 const std::vector<std::complex<double>>& b);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::vector<int> dims_;
  long n_real_ = 0;
  long n_cplx_ = 0;
};

} // namespace morrey
