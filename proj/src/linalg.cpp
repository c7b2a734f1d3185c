#include "lpoint/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lpoint/error.hpp"

namespace lpoint {

namespace {

double off_diagonal_norm2(const CMatrix& a) {
    double s = 0.0;
    const auto n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

}  // namespace

double hermiticity_defect(const CMatrix& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEigen jacobi_eigh(const CMatrix& input, double rel_tol, int max_sweeps) {
    if (input.rows() != input.cols()) throw PreconditionError("jacobi_eigh: matrix not square");
    const Eigen::Index n = input.rows();

    // Symmetrize so round-off in the input does not bias the rotations.
    CMatrix a = 0.5 * (input + input.adjoint());
    CMatrix v = CMatrix::Identity(n, n);
    const double scale2 = std::max(a.squaredNorm(), 1e-300);
    const double target = rel_tol * rel_tol * scale2;

    HermitianEigen out;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm2(a) <= target) break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Skip rotations that cannot change the diagonal in floating point.
                if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
                    std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cplx phase = apq / mag;
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
                const cplx jpp = c;
                const cplx jpq = s;
                const cplx jqp = -s * std::conj(phase);
                const cplx jqq = c * std::conj(phase);

                // A <- A J (columns p, q)
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                // A <- J^H A (rows p, q)
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    if (off_diagonal_norm2(a) > target) {
        throw ConvergenceError("jacobi_eigh: no convergence", std::sqrt(off_diagonal_norm2(a)),
                               static_cast<std::size_t>(sweep));
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });

    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]).real();
        out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    out.sweeps = sweep;

    const double hnorm = std::sqrt(scale2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = (input * out.vectors.col(i) - out.values(i) * out.vectors.col(i)).norm();
        if (r > 1e-9 * hnorm + 1e-300) {
            throw ConvergenceError("jacobi_eigh: residual above 1e-9 ||H||", r,
                                   static_cast<std::size_t>(sweep));
        }
    }
    return out;
}

std::vector<std::pair<int, int>> degenerate_groups(const Eigen::VectorXd& values, double tol) {
    std::vector<std::pair<int, int>> groups;
    const int n = static_cast<int>(values.size());
    int begin = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n || values(i) - values(i - 1) > tol) {
            groups.emplace_back(begin, i);
            begin = i;
        }
    }
    return groups;
}

}  // namespace lpoint
