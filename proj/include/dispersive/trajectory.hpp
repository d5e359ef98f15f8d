#pragma once

#include "dispersive/fourier.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace dispersive {

template <typename Scalar>
struct SampleNorms {
  Scalar l2 = 0;
  Scalar linf = 0;
  Scalar dx_l2 = 0;
  Scalar mass = 0;
};

template <typename Scalar>
SampleNorms<Scalar> sample_norms(const Field<Scalar>& f) {
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  return {lp_norm(f, Scalar(2)), lp_norm(f, inf), lp_norm(derivative(f, 1), Scalar(2)), integral(f)};
}

// Time-ordered snapshots of a field on one grid, with cached norms.
template <typename Scalar>
class Trajectory {
 public:
  explicit Trajectory(const SpectralGrid<Scalar>& grid) : grid_(grid) {}

  void push_back(Scalar t, Field<Scalar> f) {
    require_same_grid(grid_, f.grid);
    if (!times_.empty() && !(t > times_.back())) throw std::invalid_argument("trajectory times must increase");
    norms_.push_back(sample_norms(f));
    times_.push_back(t);
    fields_.push_back(std::move(f));
  }

  const SpectralGrid<Scalar>& grid() const { return grid_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<Scalar>& times() const { return times_; }
  const std::vector<Field<Scalar>>& fields() const { return fields_; }
  const std::vector<SampleNorms<Scalar>>& norms() const { return norms_; }
  Scalar time(std::size_t k) const { return times_[k]; }
  const Field<Scalar>& field(std::size_t k) const { return fields_[k]; }

  std::vector<Scalar> l2_series() const { return pick(&SampleNorms<Scalar>::l2); }
  std::vector<Scalar> linf_series() const { return pick(&SampleNorms<Scalar>::linf); }
  std::vector<Scalar> dx_l2_series() const { return pick(&SampleNorms<Scalar>::dx_l2); }

 private:
  std::vector<Scalar> pick(Scalar SampleNorms<Scalar>::*member) const {
    std::vector<Scalar> out;
    out.reserve(norms_.size());
    for (const auto& n : norms_) out.push_back(n.*member);
    return out;
  }

  SpectralGrid<Scalar> grid_;
  std::vector<Scalar> times_;
  std::vector<Field<Scalar>> fields_;
  std::vector<SampleNorms<Scalar>> norms_;
};

}  // namespace dispersive
