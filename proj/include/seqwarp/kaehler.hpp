#pragma once

#include <Eigen/Dense>

namespace seqwarp {

// Flat model of a complex space form: R^N with a constant orthogonal complex
// structure J and holomorphic sectional curvature c.
class KaehlerAmbient {
public:
    // J must satisfy J^2 = -I and J^T J = I within `tol`.
    KaehlerAmbient(Eigen::MatrixXd J, double holomorphic_curvature, double tol = 1e-12);

    int dim() const { return static_cast<int>(J_.rows()); }
    double c() const { return c_; }
    const Eigen::MatrixXd& J() const { return J_; }

    Eigen::VectorXd apply_J(const Eigen::VectorXd& v) const { return J_ * v; }

    // R(X,Y)Z = (c/4){<Y,Z>X - <X,Z>Y + <JY,Z>JX - <JX,Z>JY + 2<X,JY>JZ}.
    Eigen::VectorXd curvature(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                              const Eigen::VectorXd& Z) const;
    // <R(X,Y)Z, W>.
    double curvature4(const Eigen::VectorXd& X, const Eigen::VectorXd& Y, const Eigen::VectorXd& Z,
                      const Eigen::VectorXd& W) const;

private:
    Eigen::MatrixXd J_;
    double c_;
};

// J e_{2i-1} = e_{2i}, J e_{2i} = -e_{2i-1} (1-based), i.e. multiplication
// by i on C^{N/2} written as (x1, y1, x2, y2, ...).
Eigen::MatrixXd standard_complex_structure(int real_dim);

// Max entry of J^2 + I and of J^T J - I.
double complex_structure_defect(const Eigen::MatrixXd& J);

}  // namespace seqwarp
