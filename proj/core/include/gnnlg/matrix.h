#pragma once

#include <Eigen/Dense>

namespace gnnlg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace gnnlg
