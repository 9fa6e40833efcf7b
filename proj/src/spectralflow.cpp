#include "floq/spectralflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

namespace floq {

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
    const int n = int(cost.rows());
    if (cost.cols() != n) throw InvalidInput("min_cost_assignment: cost must be square");
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> u(size_t(n) + 1, 0.0), v(size_t(n) + 1, 0.0);
    std::vector<int> p(size_t(n) + 1, 0), way(size_t(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(size_t(n) + 1, inf);
        std::vector<char> used(size_t(n) + 1, 0);
        do {
            used[size_t(j0)] = 1;
            const int i0 = p[size_t(j0)];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[size_t(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[size_t(i0)] - v[size_t(j)];
                if (cur < minv[size_t(j)]) {
                    minv[size_t(j)] = cur;
                    way[size_t(j)] = j0;
                }
                if (minv[size_t(j)] < delta) {
                    delta = minv[size_t(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[size_t(j)]) {
                    u[size_t(p[size_t(j)])] += delta;
                    v[size_t(j)] -= delta;
                } else {
                    minv[size_t(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[size_t(j0)] != 0);
        do {
            const int j1 = way[size_t(j0)];
            p[size_t(j0)] = p[size_t(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(size_t(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[size_t(j)] > 0) row_to_col[size_t(p[size_t(j)] - 1)] = j - 1;
    return row_to_col;
}

namespace {

std::vector<std::vector<Eigen::Index>> theta_clusters(const RealVector& theta, double tol) {
    const Eigen::Index n = theta.size();
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return theta[a] < theta[b]; });
    std::vector<std::vector<Eigen::Index>> out;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i > 0 && std::abs(theta[order[size_t(i)]] - theta[order[size_t(i - 1)]]) < tol)
            out.back().push_back(order[size_t(i)]);
        else
            out.push_back({order[size_t(i)]});
    }
    if (out.size() > 1) {
        const double wrap = std::abs(principal_angle(theta[out.front().front()] -
                                                     theta[out.back().back()]));
        if (wrap < tol) {
            for (auto idx : out.back()) out.front().push_back(idx);
            out.pop_back();
        }
    }
    return out;
}

}  // namespace

BandTrack track(const std::vector<SweepPoint>& sweep, const TrackOptions& opts) {
    if (sweep.empty()) throw InvalidInput("track: empty sweep");
    const Eigen::Index bands = sweep.front().states.cols();
    const int points = int(sweep.size());

    BandTrack out;
    out.period = sweep.front().period;
    out.grid.reserve(size_t(points));
    out.index_path = Eigen::MatrixXi(bands, points);
    out.xi = Eigen::MatrixXd(bands, points);
    out.theta = Eigen::MatrixXd(bands, points);
    out.gamma = Eigen::MatrixXd(bands, points);
    out.match_overlap = Eigen::MatrixXd::Ones(bands, points);

    Matrix prev_states;  // tracked order
    for (int pnt = 0; pnt < points; ++pnt) {
        const SweepPoint& sp = sweep[size_t(pnt)];
        if (sp.states.cols() != bands) throw InvalidInput("track: level count changes");
        out.grid.push_back(sp.parameter);

        Matrix states = sp.states;

        std::vector<int> assign(static_cast<size_t>(bands));
        if (pnt == 0) {
            std::iota(assign.begin(), assign.end(), 0);
        } else {
            // degenerate clusters: align the arbitrary intra-cluster basis
            // with the previous point (polar rotation), unless a declared
            // symmetry already fixed it
            if (!sp.symmetry_fixed) {
                for (const auto& cluster : theta_clusters(sp.theta, opts.degeneracy_gap)) {
                    if (cluster.size() < 2) continue;
                    const Eigen::Index c = Eigen::Index(cluster.size());
                    Matrix b = prev_states.adjoint() * [&] {
                        Matrix sub(states.rows(), c);
                        for (Eigen::Index i = 0; i < c; ++i) sub.col(i) = states.col(cluster[size_t(i)]);
                        return sub;
                    }();
                    // rows with the largest weight pick the partner levels
                    std::vector<Eigen::Index> rows(static_cast<size_t>(bands));
                    std::iota(rows.begin(), rows.end(), 0);
                    std::sort(rows.begin(), rows.end(), [&](Eigen::Index x, Eigen::Index y) {
                        return b.row(x).squaredNorm() > b.row(y).squaredNorm();
                    });
                    Matrix m(c, c);
                    for (Eigen::Index i = 0; i < c; ++i) m.row(i) = b.row(rows[size_t(i)]);
                    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
                    const Matrix rot = svd.matrixV() * svd.matrixU().adjoint();
                    Matrix sub(states.rows(), c);
                    for (Eigen::Index i = 0; i < c; ++i) sub.col(i) = states.col(cluster[size_t(i)]);
                    sub = sub * rot;
                    for (Eigen::Index i = 0; i < c; ++i) states.col(cluster[size_t(i)]) = sub.col(i);
                }
            }

            const Eigen::MatrixXd overlap = (prev_states.adjoint() * states).cwiseAbs();
            if (bands <= opts.exact_max_dim) {
                assign = min_cost_assignment(Eigen::MatrixXd(-overlap.array().square()));
            } else {
                // greedy: bands in order of decreasing best overlap
                std::vector<char> taken(size_t(bands), 0);
                std::vector<Eigen::Index> order(static_cast<size_t>(bands));
                std::iota(order.begin(), order.end(), 0);
                std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
                    return overlap.row(x).maxCoeff() > overlap.row(y).maxCoeff();
                });
                for (Eigen::Index b : order) {
                    int best = -1;
                    double bestv = -1.0;
                    for (Eigen::Index j = 0; j < bands; ++j)
                        if (!taken[size_t(j)] && overlap(b, j) > bestv) {
                            bestv = overlap(b, j);
                            best = int(j);
                        }
                    taken[size_t(best)] = 1;
                    assign[size_t(b)] = best;
                }
            }

            // ambiguity diagnostics: runner-up within ambiguity_gap
            for (Eigen::Index b = 0; b < bands; ++b) {
                const double chosen = overlap(b, assign[size_t(b)]);
                double runner = -1.0;
                for (Eigen::Index j = 0; j < bands; ++j)
                    if (int(j) != assign[size_t(b)]) runner = std::max(runner, overlap(b, j));
                if (runner >= 0 && chosen - runner < opts.ambiguity_gap) {
                    out.ambiguities.push_back({pnt, int(b), chosen - runner});
                    if (opts.throw_on_ambiguity)
                        throw NumericFailure(
                            "track: ambiguous assignment at point " + std::to_string(pnt) +
                            ", band " + std::to_string(b) + "; refine the sweep grid");
                }
                out.match_overlap(b, pnt) = chosen;
            }
        }

        prev_states = Matrix(states.rows(), bands);
        for (Eigen::Index b = 0; b < bands; ++b) {
            const int idx = assign[size_t(b)];
            out.index_path(b, pnt) = idx;
            out.xi(b, pnt) = sp.xi.size() > idx ? sp.xi[idx] : 0.0;
            out.theta(b, pnt) = sp.theta.size() > idx ? sp.theta[idx] : 0.0;
            out.gamma(b, pnt) = sp.gamma.size() > idx ? sp.gamma[idx] : 0.0;
            prev_states.col(b) = states.col(idx);
        }
    }
    return out;
}

Eigen::MatrixXd reference_overlap(const std::vector<SweepPoint>& sweep, const BandTrack& tr,
                                  const Vector& reference) {
    const Eigen::Index bands = tr.index_path.rows();
    const int points = int(tr.index_path.cols());
    Eigen::MatrixXd f(bands, points);
    for (int p = 0; p < points; ++p) {
        const Matrix& states = sweep[size_t(p)].states;
        if (states.rows() != reference.size())
            throw InvalidInput("reference_overlap: reference dimension mismatch");
        for (Eigen::Index b = 0; b < bands; ++b) {
            const Cplx o = reference.dot(states.col(tr.index_path(b, p)));
            f(b, p) = std::norm(o);
        }
    }
    return f;
}

PhotonIndices photon_index(const BandTrack& tr, double omega, double round_tol) {
    if (!(omega > 0)) throw InvalidInput("photon_index: omega must be positive");
    const Eigen::Index bands = tr.index_path.rows();
    const int points = int(tr.index_path.cols());
    PhotonIndices out;
    out.ell = Eigen::MatrixXi::Zero(bands, points);
    for (int p = 0; p < points; ++p)
        for (Eigen::Index b = 0; b < bands; ++b) {
            const double eps_f = tr.theta(b, p) / tr.period;
            const double frac = (tr.xi(b, p) - eps_f) / omega;
            const int ell = int(std::lround(frac));
            out.ell(b, p) = ell;
            if (std::abs(frac - ell) > round_tol) out.unresolved.push_back({int(b), p});
        }
    return out;
}

}  // namespace floq
