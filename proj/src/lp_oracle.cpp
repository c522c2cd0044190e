#include "firmin/lp_oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace firmin {

namespace {

// Two-phase revised simplex for  min c^T y  s.t.  M y = q, y >= 0.
// Small m (rows), large n (columns); the basis is refactored every
// iteration, which is cheap at these sizes.
class Simplex {
public:
    Simplex(Eigen::MatrixXd m, Eigen::VectorXd q, Eigen::VectorXd c)
        : m_(std::move(m)), q_(std::move(q)), cost_(std::move(c))
    {
    }

    // Returns the optimal simplex multipliers pi (solution of the dual of
    // the standard-form problem) and the optimal objective value.
    void solve(Eigen::VectorXd& pi_out, double& objective_out)
    {
        const auto rows = m_.rows();
        const auto cols = m_.cols();

        // Phase 1: artificial identity basis.
        Eigen::MatrixXd work(rows, cols + rows);
        work.leftCols(cols) = m_;
        work.rightCols(rows) = Eigen::MatrixXd::Identity(rows, rows);
        Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(cols + rows);
        phase1_cost.tail(rows).setOnes();

        basis_.resize(static_cast<std::size_t>(rows));
        for (Eigen::Index i = 0; i < rows; ++i) basis_[static_cast<std::size_t>(i)] = cols + i;

        run(work, phase1_cost, cols + rows, /*forbid_from=*/cols + rows);
        {
            const double infeas = objective(work, phase1_cost);
            if (infeas > 1e-8) {
                throw InvalidInput("lp_oracle_design: phase-1 infeasible (should not happen)");
            }
        }

        // Drive lingering artificials out of the (degenerate) basis. An
        // artificial whose basis row is independent of every real column
        // marks a redundant constraint and can safely stay at zero.
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < cols) continue;
            Eigen::MatrixXd b(rows, rows);
            for (Eigen::Index r = 0; r < rows; ++r) {
                b.col(r) = work.col(basis_[static_cast<std::size_t>(r)]);
            }
            Eigen::VectorXd unit = Eigen::VectorXd::Zero(rows);
            unit(i) = 1.0;
            Eigen::VectorXd row = b.transpose().partialPivLu().solve(unit);
            for (Eigen::Index j = 0; j < cols; ++j) {
                if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
                if (std::abs(row.dot(work.col(j))) > 1e-9) {
                    basis_[static_cast<std::size_t>(i)] = j;
                    break;
                }
            }
        }

        // Phase 2: artificial columns may linger in a degenerate basis at
        // value zero; they are barred from re-entering.
        Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(cols + rows);
        phase2_cost.head(cols) = cost_;
        phase2_cost.tail(rows).setConstant(std::numeric_limits<double>::quiet_NaN());
        run(work, phase2_cost, cols, /*forbid_from=*/cols);

        Eigen::MatrixXd b(rows, rows);
        Eigen::VectorXd cb(rows);
        for (Eigen::Index i = 0; i < rows; ++i) {
            b.col(i) = work.col(basis_[static_cast<std::size_t>(i)]);
            const auto j = basis_[static_cast<std::size_t>(i)];
            cb(i) = (j < cols) ? cost_(j) : 0.0;
        }
        pi_out = b.transpose().partialPivLu().solve(cb);
        objective_out = objective(work, phase2_cost);
    }

private:
    double objective(const Eigen::MatrixXd& work, const Eigen::VectorXd& costs) const
    {
        Eigen::MatrixXd b(work.rows(), work.rows());
        for (Eigen::Index i = 0; i < work.rows(); ++i) {
            b.col(i) = work.col(basis_[static_cast<std::size_t>(i)]);
        }
        Eigen::VectorXd xb = b.partialPivLu().solve(q_);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < work.rows(); ++i) {
            const auto j = basis_[static_cast<std::size_t>(i)];
            if (!std::isnan(costs(j))) acc += costs(j) * xb(i);
        }
        return acc;
    }

    void run(const Eigen::MatrixXd& work, const Eigen::VectorXd& costs, Eigen::Index priceable,
             Eigen::Index forbid_from)
    {
        const auto rows = work.rows();
        const int max_iter = 20000;
        int stalled = 0;
        double last_obj = std::numeric_limits<double>::infinity();

        for (int iter = 0; iter < max_iter; ++iter) {
            Eigen::MatrixXd b(rows, rows);
            Eigen::VectorXd cb(rows);
            for (Eigen::Index i = 0; i < rows; ++i) {
                b.col(i) = work.col(basis_[static_cast<std::size_t>(i)]);
                cb(i) = costs(basis_[static_cast<std::size_t>(i)]);
            }
            // A lingering artificial has cost NaN in phase 2 but sits at
            // value zero; treat its cost as zero for pricing purposes.
            for (Eigen::Index i = 0; i < rows; ++i) {
                if (std::isnan(cb(i))) cb(i) = 0.0;
            }
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
            Eigen::VectorXd xb = lu.solve(q_);
            Eigen::VectorXd pi = b.transpose().partialPivLu().solve(cb);

            const double obj = cb.dot(xb);
            if (obj < last_obj - 1e-13 * (1.0 + std::abs(last_obj))) {
                stalled = 0;
            } else {
                ++stalled;
            }
            last_obj = obj;
            const bool bland = stalled > 64;

            Eigen::Index enter = -1;
            double best = -1e-9;
            for (Eigen::Index j = 0; j < priceable; ++j) {
                if (j >= forbid_from) continue;
                if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
                const double rc = costs(j) - pi.dot(work.col(j));
                if (bland) {
                    if (rc < -1e-9) {
                        enter = j;
                        break;
                    }
                } else if (rc < best) {
                    best = rc;
                    enter = j;
                }
            }
            if (enter < 0) return;  // optimal

            Eigen::VectorXd dir = lu.solve(work.col(enter));
            Eigen::Index leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < rows; ++i) {
                if (dir(i) > 1e-11) {
                    const double ratio = xb(i) / dir(i);
                    if (ratio < best_ratio - 1e-12 ||
                        (bland && ratio < best_ratio + 1e-12 &&
                         (leave < 0 || basis_[static_cast<std::size_t>(i)] <
                                           basis_[static_cast<std::size_t>(leave)]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) {
                throw InvalidInput("lp_oracle_design: unbounded subproblem (should not happen)");
            }
            basis_[static_cast<std::size_t>(leave)] = enter;
        }
        throw NonConvergence("lp_oracle_design: simplex iteration cap reached", max_iter, last_obj);
    }

    Eigen::MatrixXd m_;
    Eigen::VectorXd q_;
    Eigen::VectorXd cost_;
    std::vector<Eigen::Index> basis_;
};

double basis_function(BasisKind basis, int n, double omega)
{
    if (n == 0) return 1.0;
    if (n <= basis.m()) return std::cos(n * omega);
    return std::sin((n - basis.m()) * omega);
}

}  // namespace

LpOracleResult lp_oracle_design(const BandSpec& bands, double k, BasisKind basis,
                                const FrequencyGrid& grid)
{
    if (!(k > 0.0)) throw InvalidInput("lp_oracle_design: weight must be positive");
    if (grid.size() > 2000) throw InvalidInput("lp_oracle_design: grid too large (max 2000 points)");
    if (basis.size() > 40) throw InvalidInput("lp_oracle_design: basis too large (max 40)");

    const int nb = basis.size();
    const Eigen::Index m_rows = nb + 1;
    const Eigen::Index n_cols = 2 * static_cast<Eigen::Index>(grid.size());

    // Dual of the Chebyshev LP:  min sum y_r s_r W_r D_r  s.t.
    //   sum y_r s_r W_r phi_n(w_r) = 0  for every basis function,
    //   sum y_r = 1,  y >= 0.
    Eigen::MatrixXd m(m_rows, n_cols);
    Eigen::VectorXd cost(n_cols);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double omega = grid.omega(i);
        const double w = bands.weight_at(omega, k);
        const double d = bands.desired_at(omega);
        for (int s = 0; s < 2; ++s) {
            const double sign = s == 0 ? 1.0 : -1.0;
            const Eigen::Index col = 2 * static_cast<Eigen::Index>(i) + s;
            for (int n = 0; n < nb; ++n) {
                m(n, col) = sign * w * basis_function(basis, n, omega);
            }
            m(nb, col) = 1.0;
            cost(col) = sign * w * d;
        }
    }
    Eigen::VectorXd q = Eigen::VectorXd::Zero(m_rows);
    q(nb) = 1.0;

    Eigen::VectorXd pi;
    double objective = 0.0;
    Simplex simplex(std::move(m), std::move(q), std::move(cost));
    simplex.solve(pi, objective);

    // The multipliers are the primal solution: coefficients and -delta.
    std::vector<double> plain(static_cast<std::size_t>(nb));
    for (int n = 0; n < nb; ++n) plain[static_cast<std::size_t>(n)] = pi(n);
    const double delta = -pi(nb);

    // KKT residual check: the recovered coefficients must satisfy every
    // grid constraint at the reported objective.
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = bands.weight_at(grid.omega(i), k);
        const double d = bands.desired_at(grid.omega(i));
        double g = 0.0;
        for (int n = 0; n < nb; ++n) {
            g += plain[static_cast<std::size_t>(n)] * basis_function(basis, n, grid.omega(i));
        }
        worst = std::max(worst, std::abs(w * (g - d)));
    }
    // Strong duality: the standard-form objective is -delta.
    if (worst > delta * (1.0 + 1e-7) + 1e-11 || std::abs(objective + delta) > 1e-8 * (1.0 + delta)) {
        throw InvalidInput("lp_oracle_design: KKT residual check failed");
    }

    LpOracleResult result;
    result.delta = delta;
    result.one_sided.resize(static_cast<std::size_t>(basis.m()) + 1);
    result.one_sided[0] = plain[0];
    for (int n = 1; n <= basis.m(); ++n) {
        const double alpha = plain[static_cast<std::size_t>(n)];
        const double beta =
            basis.kind() == BasisKind::Kind::CosineAndSine ? plain[static_cast<std::size_t>(basis.m() + n)] : 0.0;
        result.one_sided[static_cast<std::size_t>(n)] = cdouble(alpha / 2.0, beta / 2.0);
    }
    return result;
}

}  // namespace firmin
