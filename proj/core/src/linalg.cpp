#include "starnet/linalg.hpp"

#include <cmath>

namespace starnet::linalg {

void canonical_sign(Eigen::Ref<Eigen::VectorXd> v) {
    if (v.size() == 0) return;
    const double top = v.cwiseAbs().maxCoeff();
    if (top == 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= top * (1.0 - 1e-12)) {
            if (v(i) < 0.0) v = -v;
            return;
        }
    }
}

double max_abs(const Eigen::MatrixXd& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

} // namespace starnet::linalg
