#include "sphlrd/reconstruct.hpp"

#include <stdexcept>

namespace sphlrd {

DesignMatrix design_matrix(const std::vector<SpherePoint>& locations,
                           const SieveBasis& sieve) {
  if (locations.empty())
    throw std::invalid_argument("design_matrix: no locations");
  DesignMatrix design;
  design.sieve = sieve;
  design.values.resize(static_cast<int>(locations.size()), sieve.size);
  Eigen::VectorXd row;
  for (std::size_t i = 0; i < locations.size(); ++i) {
    evaluate_basis(locations[i], sieve.max_degree, row);
    design.values.row(static_cast<int>(i)) = row;
  }
  return design;
}

double mass_matrix_deviation(const DesignMatrix& design) {
  const double m = static_cast<double>(design.values.rows());
  Eigen::MatrixXd gram = design.values.transpose() * design.values / m;
  gram.diagonal().array() -= 1.0;
  return gram.squaredNorm();
}

LeastSquaresSolver::LeastSquaresSolver(const DesignMatrix& design,
                                       double relative_cutoff)
    : sieve_(design.sieve) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      design.values, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? relative_cutoff * sv[0] : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff && sv[i] > 0.0) {
      inv[i] = 1.0 / sv[i];
      ++effective_rank_;
    }
  }
  pseudo_inverse_.noalias() =
      svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::VectorXd LeastSquaresSolver::solve(const Eigen::VectorXd& y) const {
  if (y.size() != pseudo_inverse_.cols())
    throw std::invalid_argument("LeastSquaresSolver: wrong snapshot length");
  return pseudo_inverse_ * y;
}

Eigen::MatrixXd LeastSquaresSolver::solve_all(
    const Eigen::MatrixXd& y_rows) const {
  if (y_rows.cols() != pseudo_inverse_.cols())
    throw std::invalid_argument("LeastSquaresSolver: wrong snapshot length");
  return y_rows * pseudo_inverse_.transpose();
}

Eigen::VectorXd reconstruct_snapshot(const Eigen::VectorXd& y,
                                     const DesignMatrix& design) {
  if (y.size() != design.values.rows())
    throw std::invalid_argument("reconstruct_snapshot: length(y) != M");
  return LeastSquaresSolver(design).solve(y);
}

CoefficientSeries reconstruct_series(const ObservationSet& obs,
                                     const SieveBasis& sieve) {
  const DesignMatrix design = design_matrix(obs.locations, sieve);
  const LeastSquaresSolver solver(design);
  CoefficientSeries series;
  series.sieve = sieve;
  series.values = solver.solve_all(obs.values);
  return series;
}

}  // namespace sphlrd
