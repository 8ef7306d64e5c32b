#include "seqwarp/kaehler.hpp"

#include <cstdio>

#include "seqwarp/errors.hpp"

namespace seqwarp {

Eigen::MatrixXd standard_complex_structure(int real_dim) {
    if (real_dim <= 0 || real_dim % 2 != 0)
        throw PreconditionError("complex structure needs a positive even dimension, got " +
                                std::to_string(real_dim));
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(real_dim, real_dim);
    for (int i = 0; i < real_dim; i += 2) {
        J(i + 1, i) = 1.0;
        J(i, i + 1) = -1.0;
    }
    return J;
}

double complex_structure_defect(const Eigen::MatrixXd& J) {
    const int n = static_cast<int>(J.rows());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const double square = (J * J + I).cwiseAbs().maxCoeff();
    const double orth = (J.transpose() * J - I).cwiseAbs().maxCoeff();
    return std::max(square, orth);
}

KaehlerAmbient::KaehlerAmbient(Eigen::MatrixXd J, double holomorphic_curvature, double tol)
    : J_(std::move(J)), c_(holomorphic_curvature) {
    if (J_.rows() != J_.cols() || J_.rows() == 0 || J_.rows() % 2 != 0)
        throw PreconditionError("complex structure must be a square matrix of even size");
    const double defect = complex_structure_defect(J_);
    if (!(defect <= tol)) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "complex structure fails J^2 = -I or J^T J = I (defect %.3e, tolerance %.1e)",
                      defect, tol);
        throw PreconditionError(buf);
    }
}

Eigen::VectorXd KaehlerAmbient::curvature(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                          const Eigen::VectorXd& Z) const {
    if (c_ == 0.0) return Eigen::VectorXd::Zero(X.size());
    const Eigen::VectorXd JX = J_ * X, JY = J_ * Y, JZ = J_ * Z;
    return (c_ / 4.0) * (Y.dot(Z) * X - X.dot(Z) * Y + JY.dot(Z) * JX - JX.dot(Z) * JY +
                         2.0 * X.dot(JY) * JZ);
}

double KaehlerAmbient::curvature4(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                  const Eigen::VectorXd& Z, const Eigen::VectorXd& W) const {
    return curvature(X, Y, Z).dot(W);
}

}  // namespace seqwarp
